#pragma once

#include <iosfwd>

namespace zvdl::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kTraceFailure = 4, kVerdictFailure = 5 };

/// Entry point of the zvdl tool; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace zvdl::cli
