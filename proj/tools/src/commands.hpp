#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kbc::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kOracle = 3 };

/// Entry point of the `kbc` tool; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kbc::cli
