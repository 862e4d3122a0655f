#include <iostream>

#include "mixsimplex/cli.hpp"

int main(int argc, char** argv) { return mixsimplex::run_cli(argc, argv, std::cout, std::cerr); }
