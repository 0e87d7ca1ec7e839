#include <iostream>
#include <string>
#include <vector>

#include "seqtrack/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return seqtrack::cli::run(args, std::cout, std::cerr);
}
