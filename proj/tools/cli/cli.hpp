#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dephaselab::cli {

/// Parses `args` (without the program name), runs the selected command and
/// returns its exit code. CSV goes to `out` unless --output is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dephaselab::cli
