#include <iostream>
#include <string>
#include <vector>

#include "qsuggest/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qsuggest::cli::run(args, std::cout, std::cerr);
}
