#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqtrack::cli {

enum ExitCode : int { kOk = 0, kError = 1, kFlagged = 2 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on any error and 2 when a
/// result was produced but failed its verification checks.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqtrack::cli
