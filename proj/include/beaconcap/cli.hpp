#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace beaconcap::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kInputError = 2,
  kCalibrationFailed = 3,
};

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "BEACONCAP_OUT";

// Runs the command line `args` (without the program name) and returns the
// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beaconcap::cli
