#include <iostream>
#include <string>
#include <vector>

#include "treeshift/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return treeshift::cli::main(args, std::cout, std::cerr);
}
