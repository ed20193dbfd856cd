#include <iostream>

#include "ucauchy/cli.hpp"

int main(int argc, char** argv) {
  return ucauchy::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
