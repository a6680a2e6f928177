#include <iostream>

#include "eigenshape/cli.hpp"

int main(int argc, char** argv) { return eigenshape::run_cli(argc, argv, std::cout, std::cerr); }
