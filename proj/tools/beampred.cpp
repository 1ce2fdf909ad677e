#include <iostream>
#include <string>
#include <vector>

#include "beampred/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return beampred::cli::run(args, std::cout, std::cerr);
}
