#pragma once

#include <string>
#include <string_view>

namespace redahd::util {

// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view text);

}  // namespace redahd::util
