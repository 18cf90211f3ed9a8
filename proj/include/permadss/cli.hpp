#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace permadss {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `permadss` tool. `args` excludes the program name.
/// Data goes to `out`, diagnostics to `err`. Returns 0 on success, 1 on a
/// domain error (range, parse, failed calibration) and 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permadss
