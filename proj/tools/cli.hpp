#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lucasmon::cli {

// Runs one command line (args[0] is the program name) and returns the exit
// code: 0 success, 1 other failure, 2 usage or invalid input, 3 resource
// guard, 4 numerical tolerance or verification failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lucasmon::cli
