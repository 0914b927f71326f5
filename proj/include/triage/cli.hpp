#pragma once

#include <iosfwd>

namespace triage {

/// Exit codes: 0 success, 1 quality gate tripped, 2 usage error, 3 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitGate = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace triage
