#include <iostream>

#include "brainrf/io/cli.h"

int main(int argc, char** argv) {
  return brainrf::io::run_cli(argc, argv, std::cout, std::cerr);
}
