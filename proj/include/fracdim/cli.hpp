#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (args excludes the program name). Results go to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 on failed
/// verification or runtime failure, 2 on argument errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a flat key=value file ('#' comments, blank lines ignored) and
/// returns the pairs as "--key", "value" tokens.
std::vector<std::string> read_config_tokens(const std::string& path);

}  // namespace fracdim::cli
