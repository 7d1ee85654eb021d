#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gkeca::cli {

/// Runs the gkeca command line. `args` excludes the program name. Normal
/// output goes to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gkeca::cli
