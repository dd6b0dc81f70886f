#include <iostream>
#include <string>
#include <vector>

#include "gameruns/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return gameruns::cli::run(args, std::cout, std::cerr);
}
