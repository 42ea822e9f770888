#include <iostream>

#include "gafzeros/cli.hpp"

int main(int argc, char** argv) {
  return gafzeros::RunCli(argc, argv, std::cout, std::cerr);
}
