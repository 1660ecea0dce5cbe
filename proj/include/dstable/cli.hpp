#pragma once

#include <iosfwd>

namespace dstable {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPrecision = 3;

/// Command-line entry point. Results go to out (or the --out file),
/// diagnostics and usage text to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dstable
