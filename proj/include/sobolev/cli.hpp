#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sobolev::cli {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 1,
  kNotConverged = 2,
  kVerdictFailed = 3,
};

/// Entry point behind the `sobolev` executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sobolev::cli
