#pragma once

namespace ru::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFault = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMismatch = 3;

// Entry point of the `ru` tool. Diagnostics go to standard error.
int run(int argc, char** argv);

}  // namespace ru::cli
