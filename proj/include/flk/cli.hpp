#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flk {

// Full command dispatch: parses `args` (no program name), runs the chosen
// subcommand, writes the report to `out` and diagnostics to `err`.  Returns
// the process exit code: 0 success, 2 validation failure, 3 construction
// failure, 64 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flk
