#include <iostream>
#include <string>
#include <vector>

#include "sentaudit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sentaudit::cli::run(args, std::cout, std::cerr);
}
