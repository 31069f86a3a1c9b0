#include <iostream>
#include <string>
#include <vector>

#include "nehari/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nehari::dispatch(args, std::cout, std::cerr);
}
