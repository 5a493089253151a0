#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rplsh::cli {

/// Exit codes of every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kValidationFailed = 1,  ///< statistical check rejected (validate)
  kUsage = 2,             ///< bad flags or parameter values
  kIoError = 3,           ///< unreadable/unwritable file or malformed input
};

/// Runs the command line `args` (args[0] is the program name). Normal output goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rplsh::cli
