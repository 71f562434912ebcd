#include <iostream>

#include "qhs/cli.hpp"

int main(int argc, char** argv) { return qhs::run_cli(argc, argv, std::cout, std::cerr); }
