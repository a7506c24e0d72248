#pragma once

#include <string>
#include <vector>

namespace hyperorbit::cli {

// Runs one command line (argv[0] excluded) and returns the process exit code.
int run(const std::vector<std::string>& args);

}  // namespace hyperorbit::cli
