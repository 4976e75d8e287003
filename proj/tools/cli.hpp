#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pbl::cli {

/// Runs one CLI invocation (arguments without the program name) and returns
/// its exit code: 0 pass, 1 verification failure, 2 usage or precondition
/// error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbl::cli
