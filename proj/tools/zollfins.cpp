#include <iostream>

#include "zollfins/cli.hpp"

int main(int argc, char** argv) { return zollfins::run_cli(argc, argv, std::cout, std::cerr); }
