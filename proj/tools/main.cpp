#include <iostream>

#include "weakstrong/cli.hpp"

int main(int argc, char** argv) { return weakstrong::cli::run_cli(argc, argv, std::cout, std::cerr); }
