#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace expanderlab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitGeneration = 3,
  kExitSpectral = 4,
  kExitVerification = 5,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expanderlab::cli
