#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace optsel::cli {

/// Exit codes: 0 success, 1 usage error, 2 numerical or domain failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optsel::cli
