#include <iostream>
#include <string>
#include <vector>

#include "sas/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sas::cli::run(args, std::cout, std::cerr);
}
