#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tissuenet {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitDiagnostics = 1,
  kExitUsage = 2,
  kExitLimit = 3,
};

/// Runs one command line (`args` excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tissuenet
