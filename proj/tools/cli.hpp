#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aybe::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kParamError = 2, kPoleError = 3 };

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aybe::cli
