#pragma once

#include <iosfwd>

namespace quadham {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConstraint = 3;

/// Runs the `quadham` command line. Reports go to `out` unless a file is
/// requested; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quadham
