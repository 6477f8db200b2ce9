#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agler::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kUnresolved = 3 };

/// Runs one `agler-lab` invocation. args[0] is the program name. Reports go
/// to --output (atomically) or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace agler::cli
