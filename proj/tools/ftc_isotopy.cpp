#include <iostream>

#include "ftc/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ftc::run_command(args, std::cout, std::cerr);
}
