#include <iostream>

#include "rmnd/cli.hpp"

int main(int argc, char** argv) { return rmnd::cli::run(argc, argv, std::cout, std::cerr); }
