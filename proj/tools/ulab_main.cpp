#include <iostream>

#include "ulab/cli.hpp"

int main(int argc, char** argv) {
  return ulab::execute_cli(argc, argv, std::cout, std::cerr);
}
