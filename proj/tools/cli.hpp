#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epochspec::cli {

/// Runs the command line `args` (without the program name) and returns the
/// process exit code: 0 ok, 2 input error, 3 config error, 4 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epochspec::cli
