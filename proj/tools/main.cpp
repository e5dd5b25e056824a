#include <iostream>
#include <vector>

#include "dawnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dawnet::run_cli(std::move(args), std::cout, std::cerr);
}
