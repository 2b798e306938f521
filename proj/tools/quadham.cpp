#include "quadham/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return quadham::run_cli(argc, argv, std::cout, std::cerr); }
