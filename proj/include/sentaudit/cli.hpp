#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sentaudit::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

/// Runs one invocation (`args` excludes the program name). Subcommands:
/// audit, compare, synth, validate. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sentaudit::cli
