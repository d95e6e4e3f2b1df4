#include <iostream>

#include "interpeval/cli.hpp"

int main(int argc, char** argv) {
  return interpeval::run_cli(argc, argv, std::cout, std::cerr);
}
