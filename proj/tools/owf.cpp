#include <iostream>

#include "owf/cli.hpp"

int main(int argc, char** argv) { return owf::run_cli(argc, argv, std::cout, std::cerr); }
