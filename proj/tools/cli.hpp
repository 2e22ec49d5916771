#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bohr::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kComputationFailure = 1,
  kUsageError = 2,
};

/// Runs the tool on `args` (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace bohr::cli
