#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gms::cli {

enum ExitCode : int {
    kOk = 0,
    kIoOrFormat = 2,
    kAlgorithmPrecondition = 3,
    kUsage = 64,
};

/// Runs one `gms` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gms::cli
