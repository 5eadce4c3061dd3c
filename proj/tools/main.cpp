#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return kbc::cli::run_cli(args, std::cout, std::cerr);
}
