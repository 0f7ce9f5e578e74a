#pragma once

#include <string>
#include <vector>

namespace gaflux::cli {

// Runs one subcommand. Returns 0 when every check passes, 1 on a check
// failure, 2 on usage or I/O errors.
int run(const std::vector<std::string>& args);

}  // namespace gaflux::cli
