#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace magcool {

/// Exit codes: 0 success, 1 domain/config error, 2 instability or runaway,
/// 3 convergence failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace magcool
