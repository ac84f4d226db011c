#include <iostream>

#include "sivt/cli.hpp"

int main(int argc, char** argv) { return sivt::cli::run_cli(argc, argv, std::cout, std::cerr); }
