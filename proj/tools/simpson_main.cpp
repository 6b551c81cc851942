#include <iostream>

#include "simpson/cli_report.hpp"

int main(int argc, char** argv) {
  return simpson::cli::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
