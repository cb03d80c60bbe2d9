#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sinoma::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kIoError = 3,
  kNumericalError = 4,
};

/// Entry point shared by the executable and the tests. `args[0]` is the
/// program name. Subcommands: simulate, detect, sweep, bench.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sinoma::cli
