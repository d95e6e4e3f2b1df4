#ifndef INTERPEVAL_CLI_HPP_
#define INTERPEVAL_CLI_HPP_

#include <iosfwd>

namespace interpeval {

// Command-line entry point. Subcommands: validate, stats, score, judge,
// kappa, correlate, report, run. Returns the process exit code: 0 success,
// 1 data/validation error, 2 configuration error, 3 backend failure.
// Failures additionally emit one JSON line on `err`:
//   {"error":"data|config|backend","message":"..."}
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace interpeval

#endif  // INTERPEVAL_CLI_HPP_
