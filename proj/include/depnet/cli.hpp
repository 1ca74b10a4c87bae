#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace depnet::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  ///< I/O failure or a violated precondition
  kUsage = 2,    ///< unknown subcommand or flag, missing required flag
};

/// Runs one `depnet` command line. argv[0] is the program name.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace depnet::cli
