#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blindrz::cli {

enum ExitCode : int {
  kOk = 0,
  kAuditFailed = 1,
  kParseError = 2,
  kUnsupportedGate = 3,
  kCapExceeded = 4,
};

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blindrz::cli
