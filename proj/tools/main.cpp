#include <vector>

#include "gaflux/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gaflux::cli::run(args);
}
