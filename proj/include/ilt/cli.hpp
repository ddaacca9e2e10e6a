#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ilt {

// Entry point shared by the binary and the test harness. Exit codes:
// 0 success / verified, 1 verification or domain failure, 2 input error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ilt
