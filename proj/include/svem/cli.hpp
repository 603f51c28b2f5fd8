#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svem::cli {

/// Parses `args` (args[0] is the program name), runs the subcommand and
/// returns the process exit status. Diagnostics go to `err` as one line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svem::cli
