#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tokeval {

// Runs the CLI in-process. args excludes the program name. Exit codes:
// 0 success, 1 data error (bad files/inputs), 2 usage error (bad flags).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tokeval
