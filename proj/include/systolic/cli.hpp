#pragma once

#include <iosfwd>

namespace systolic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitInput = 2;

/// Entry point of the `systolab` tool. Writes the report to `out` and
/// diagnostics to `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace systolic::cli
