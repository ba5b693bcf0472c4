#include <iostream>

#include "spindyn/cli.hpp"

int main(int argc, char** argv) { return spindyn::cli::run(argc, argv, std::cout, std::cerr); }
