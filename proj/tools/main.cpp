#include <iostream>
#include <string>
#include <vector>

#include "bnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bnet::cli::run(args, std::cout, std::cerr);
}
