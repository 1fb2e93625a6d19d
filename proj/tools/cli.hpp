#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gujfont {

// Runs one command line (without the program name). Human-readable output
// goes to `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gujfont
