#pragma once

#include <iosfwd>

namespace steiner {

/// Full command-line front end. Parses argv, runs the subcommand, writes
/// the machine-readable payload (with its config echo) to `out` or to
/// --out, warnings to the log stream. Returns the process exit code:
/// 0 success, 2 input validation failure, 3 numerical non-convergence.
int run_cli(int argc, const char* const* argv, std::ostream& out);

}  // namespace steiner
