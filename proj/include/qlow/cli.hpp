#pragma once

#include <ostream>
#include <span>
#include <string>

namespace qlow::cli {

enum ExitCode : int {
    kSuccess = 0,
    /// Unexpected internal failure.
    kInternalError = 1,
    kConfigError = 2,
    kResourceCap = 3,
    kNumericFailure = 4,
};

/// Entry point behind the `qlow` executable. `args` excludes the program
/// name. Results go to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream &out, std::ostream &err);

} // namespace qlow::cli
