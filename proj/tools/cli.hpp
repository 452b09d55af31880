#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circkde::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_usage = 1,
  exit_data = 2,
  exit_numerical = 3,
};

//! Runs the command line `args` (without the program name), writing normal
//! output to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace circkde::cli
