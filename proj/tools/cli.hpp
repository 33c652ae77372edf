#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ktchart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
/// Unknown flags, bad values, violated preconditions.
inline constexpr int kExitUsage = 2;
/// Missing files, unreadable or malformed input, write failures.
inline constexpr int kExitIo = 3;
/// Solver or other numerical failure.
inline constexpr int kExitNumerical = 4;

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out`, diagnostics and the resolved-config log line to `err`. Output files
/// are written through a temporary and only appear on success.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ktchart::cli
