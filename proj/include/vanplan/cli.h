#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vanplan::cli {

enum ExitCode : int {
  ok = 0,
  usage_error = 1,
  infeasible_instance = 2,
  invalid_schedule = 3,
  io_error = 4,
};

// Runs one command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vanplan::cli
