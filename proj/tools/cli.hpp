#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hjelmslev::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kBudget = 2, kVerifyFailed = 3 };

/// Runs one command. `args` excludes the program name; "plane info" style two-word commands
/// are accepted as well as "plane-info".
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hjelmslev::cli
