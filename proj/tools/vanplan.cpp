#include <iostream>
#include <string>
#include <vector>

#include "vanplan/cli.h"

int main(int argc, char** argv) {
  return vanplan::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
