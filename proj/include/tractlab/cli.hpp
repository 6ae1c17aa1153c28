#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tractlab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitBudget = 3, kExitMismatch = 4 };

// tractlab <command> --config <path> [--out <path>] [--format csv|json] [--dmax N] [--tol X] [--budget N]
// args excludes the program name. Results go to --out (or `out`), notes to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tractlab
