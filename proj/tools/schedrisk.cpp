#include <iostream>
#include <string>
#include <vector>

#include "schedrisk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return schedrisk::run_cli(args, std::cout, std::cerr);
}
