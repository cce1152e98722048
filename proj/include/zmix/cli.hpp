#pragma once

#include <ostream>

namespace zmix::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kFormat = 3,
  kNumeric = 4,
};

/// Entry point of the `zmix` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zmix::cli
