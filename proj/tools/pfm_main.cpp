#include <iostream>

#include "pfm/cli.hpp"

int main(int argc, char** argv) {
  return pfm::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
