#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ulab {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitResourceCap = 3,
};

// args excludes the program name.
int execute_cli(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);
int execute_cli(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err);

}  // namespace ulab
