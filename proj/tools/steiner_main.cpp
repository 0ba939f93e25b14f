#include <iostream>

#include "steiner/cli_runner.hpp"

int main(int argc, char** argv) {
  return steiner::run_cli(argc, argv, std::cout);
}
