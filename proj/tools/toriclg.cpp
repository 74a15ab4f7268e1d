#include <iostream>
#include <string>
#include <vector>

#include "toriclg/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return toriclg::run_command(args, std::cout, std::cerr);
}
