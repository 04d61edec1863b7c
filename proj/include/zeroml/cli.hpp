#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zeroml {

/// Entry point of the `zeroml` binary. `args` excludes the program name.
/// Program output goes to `out`, diagnostics to `err`. Returns the exit code
/// (0 ok, 1 usage, 2 compile-time error, 3 runtime error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zeroml
