#pragma once

#include <iosfwd>

namespace invmean::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitApproximate = 2;
inline constexpr int kExitCheckFailed = 3;

/// Entry point of the `invmean` tool; argv[0] is the program name. Results go to
/// `out` (or to --out), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invmean::cli
