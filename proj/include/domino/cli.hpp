#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace domino::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kIoOrParse = 2,
  kPhysicalDomain = 3,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a plain-text key=value file; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

}  // namespace domino::cli
