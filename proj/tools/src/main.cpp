#include <iostream>

#include "ashg_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ashg::cli::run(args, std::cout, std::cerr);
}
