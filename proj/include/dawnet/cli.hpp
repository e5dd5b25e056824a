#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dawnet {

/// Entry point behind the `dawnet` binary; returns the process exit code
/// (0 success, 1 diagnostics, 2 usage).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dawnet
