#pragma once

#include <iosfwd>

namespace cva::cli {

/// Exit codes: 0 success, 1 error, 2 report written with per-date failures.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;

/// Entry point shared by the executable and the in-process tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cva::cli
