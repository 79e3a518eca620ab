#include <iostream>

#include "osnrecruit/cli.hpp"

int main(int argc, char** argv) { return osnrecruit::run_cli(argc, argv, std::cout, std::cerr); }
