#include "graphred/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return graphred::run_cli(argc, argv, std::cout, std::cerr); }
