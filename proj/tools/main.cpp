#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return lorentz_iso::cli::run_cli(argc, argv, std::cout, std::cerr); }
