#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ashg::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSome = 0,     ///< SOME / stable / success
  kNone = 1,     ///< NONE / unstable
  kUnknown = 2,  ///< resource limit or non-convergence
  kInputError = 3,
};

/// Runs one command line (without the program name). The JSON run report
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ashg::cli
