#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace datacurv::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

/// Runs the command line `args` (without the program name). Diagnostics go
/// to `err`, progress lines to `out`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace datacurv::cli
