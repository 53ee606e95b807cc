#include <iostream>
#include <string>
#include <vector>

#include "rrkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rrkit::dispatch(args, std::cout, std::cerr);
}
