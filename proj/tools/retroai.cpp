#include <iostream>
#include <string>
#include <vector>

#include "retroai/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return retroai::cli::run(args, std::cout, std::cerr);
}
