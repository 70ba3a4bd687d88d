#pragma once

#include <string>
#include <vector>

namespace maxwell {

// Exit codes: 0 success, 2 validation error, 3 numeric non-convergence,
// 4 oracle size bound exceeded.
int run_cli(const std::vector<std::string>& args);

}  // namespace maxwell
