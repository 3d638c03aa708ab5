#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ppmwords/error.hpp"

namespace ppmwords::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kNumeric = 3 };

/// Exit code documented for each error kind.
int exit_code(ErrorKind kind);

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppmwords::cli
