#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fastesc {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInvalidInput = 2 };

/// Entry point for `fastesc <analyze|classify|certify|render|loops> --config <path>`.
/// Data goes to `out` and to files, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fastesc
