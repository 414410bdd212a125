#include <iostream>

#include "fracgreen/cli.hpp"

int main(int argc, char** argv) {
  return fracgreen::run_cli(argc, argv, std::cout);
}
