#pragma once

#include <string>
#include <vector>

namespace codbench::cli {

// Exit codes: 0 success, 1 runtime error, 2 usage error, 3 curation left no
// accepted samples.
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitEmptyManifest = 3;

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args);

} // namespace codbench::cli
