#include <iostream>

#include "attest/cli.hpp"

int main(int argc, char** argv) { return attest::run_cli(argc, argv, std::cout, std::cerr); }
