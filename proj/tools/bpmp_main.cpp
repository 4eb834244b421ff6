#include <iostream>

#include "bpmp/cli.hpp"

int main(int argc, char** argv) { return bpmp::run_cli(argc, argv, std::cout, std::cerr); }
