#include <iostream>

#include "alex/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return alex::cli::run(args, {std::cin, std::cout, std::cerr});
}
