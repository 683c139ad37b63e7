#include <iostream>

#include "snw/cli.hpp"

int main(int argc, char** argv) {
  return snw::cli::run(argc, argv, std::cout, std::cerr);
}
