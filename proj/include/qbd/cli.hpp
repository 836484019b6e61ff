#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerification = 4;

/// Runs one subcommand. `args` excludes the program name. Errors are written
/// to `err` as a single-line JSON record and mapped to the exit codes above.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbd
