#include <iostream>
#include <string>
#include <vector>

#include "qaction/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qaction::cli_run(args, std::cout, std::cerr);
}
