#pragma once

// Command-line front end. Exit codes: 0 success, 1 config or usage error,
// 2 precondition or other library error, 3 budget exhausted, 4 acceptance
// criteria failed.

#include <ostream>
#include <string>
#include <vector>

namespace mls {

inline constexpr const char* kOutputDirEnv = "MLS_OUTPUT_DIR";

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mls
