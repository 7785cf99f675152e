#include <iostream>

#include "se3ctl/cli/commands.hpp"

int main(int argc, char** argv) { return se3ctl::cli::main_entry(argc, argv, std::cout, std::cerr); }
