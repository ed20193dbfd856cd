#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ucauchy {

// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

// Runs one CLI invocation; args excludes the program name. The JSON report goes
// to `out`, diagnostics to `err`, bulk files to the output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ucauchy
