// geophase.cpp — command-line front end.

#include "geophase/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return geophase::cli::run_cli(argc, argv, std::cout, std::cerr); }
