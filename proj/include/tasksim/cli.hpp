#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tasksim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitStarvation = 3;
inline constexpr int kExitTimeLimit = 4;

/// Entry point behind the `tasksim` executable. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tasksim
