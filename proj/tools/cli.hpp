#pragma once

#include <iosfwd>

namespace amhd::cli {

// 0 success, 1 a verification failed, 2 bad arguments or config,
// 3 solver fault.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolverFault = 3;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace amhd::cli
