#include <iostream>

#include "qrom_cli/commands.hpp"

int main(int argc, char **argv) { return qrom::cli::run(argc, argv, std::cout, std::cerr); }
