#include <iostream>
#include <string>
#include <vector>

#include "opineq/harness.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return opineq::cli(args, std::cout, std::cerr);
}
