#include <iostream>
#include <string>
#include <vector>

#include "zetapair_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zetapair::cli::run(args, std::cout, std::cerr);
}
