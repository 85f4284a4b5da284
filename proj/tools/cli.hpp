#pragma once

#include <string>
#include <vector>

namespace kolmo::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

/// Runs one subcommand; `args` excludes the program name. Returns 0 when
/// every executed check passes, 1 on a property failure and 2 on a
/// configuration or runtime error.
int run(const std::vector<std::string>& args);

/// Writes `content` to `path` through a temporary file and a rename; an
/// empty path writes to stdout.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace kolmo::cli
