#include <iostream>

#include "mte/cli.hpp"

int main(int argc, char** argv) { return mte::run_cli(argc, argv, std::cout, std::cerr); }
