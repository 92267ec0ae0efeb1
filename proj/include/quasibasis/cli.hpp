#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). The command result is
/// written to `out` as JSON, or as CSV for `represent --format csv`; usage
/// errors and messages go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qb::cli
