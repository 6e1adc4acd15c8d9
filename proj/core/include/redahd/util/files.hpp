#pragma once

#include <filesystem>
#include <string>

namespace redahd::util {

std::string read_file(const std::filesystem::path& path);
// Writes atomically through a sibling temporary file.
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace redahd::util
