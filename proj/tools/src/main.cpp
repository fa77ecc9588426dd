#include <iostream>
#include <string>
#include <vector>

#include "flowgnn_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flowgnn::cli::run(args, std::cout, std::cerr);
}
