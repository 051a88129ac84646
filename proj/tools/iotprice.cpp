#include <iostream>

#include "iotprice/cli/commands.hpp"

int main(int argc, char** argv) {
  return iotprice::cli::run_cli(argc, argv, std::cout, std::cerr);
}
