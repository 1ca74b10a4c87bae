#include <iostream>
#include <string>
#include <vector>

#include "depnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return depnet::cli::dispatch(args, std::cout, std::cerr);
}
