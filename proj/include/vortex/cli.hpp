#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vortex {

/// Entry point of the `vortex` tool. `args` excludes the program name.
/// Exit codes: 0 success, 1 failure, 2 missing input file; CLI11 codes for usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a:b:step" into a, a + step, ... up to b inclusive.
std::vector<double> parse_range(const std::string& spec);

}  // namespace vortex
