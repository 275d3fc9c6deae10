#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace schedrisk {

/// Runs the command line `args` (without the program name). Data goes to
/// `out`, diagnostics to `err`. Returns the process exit code: 0 success,
/// 1 validation or domain error, 2 I/O error, 3 configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schedrisk
