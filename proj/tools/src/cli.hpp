#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace redahd::cli {

// Exit codes: 0 success, 1 the command ran but its postcondition failed
// (invalid solutions, no valid reduction, ...), 2 bad usage or input.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace redahd::cli
