#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optocorr {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitNumeric = 3,
    kExitIo = 4,
};

/// Entry point of the `optocorr` tool. `args` excludes the program name.
/// Normal output goes to `out` unless --out is given; diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optocorr
