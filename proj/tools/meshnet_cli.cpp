#include <iostream>
#include <string>
#include <vector>

#include "meshnet/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return meshnet::cli_dispatch(args, std::cout, std::cerr);
}
