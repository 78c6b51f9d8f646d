#pragma once

#include <iosfwd>

namespace vbsbm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;       ///< oracle-check found a negative gap
inline constexpr int kExitUsage = 2;         ///< bad flags, unreadable or malformed input
inline constexpr int kExitNotConverged = 3;  ///< fit printed a result that did not converge

/// Entry point of the `vbsbm` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace vbsbm::cli
