#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kirby::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kUnknown = 1,  // verdict unknown or a selftest check failed
  kUsage = 2,    // bad arguments, unreadable file, parse error
  kMoveError = 3,
};

/// args excludes the program name.  Results go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kirby::cli
