#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topowork::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kGapClosure = 3,
};

/// Entry point of the `topowork` tool. args[0] is the program name.
/// Writes a one-line JSON summary to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace topowork::cli
