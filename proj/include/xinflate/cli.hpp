#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xinflate {

/// Runs the xinflate command line (arguments after the program name).
/// Returns the process exit code: 0 on success, 2 on invalid input or a
/// misclassified instance, 1 on internal errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace xinflate
