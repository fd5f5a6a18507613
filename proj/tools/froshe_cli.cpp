#include <iostream>

#include "froshe/cli.hpp"

int main(int argc, char** argv) { return froshe::run_cli(argc, argv, std::cout, std::cerr); }
