#include <iostream>

#include "eqpl/cli.hpp"

int main(int argc, char** argv) {
  return eqpl::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
