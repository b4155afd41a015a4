#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace debate {

/// Runs one command line (args[0] is the program name). Reports go to
/// `out`, diagnostics to `err`; the return value is the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace debate
