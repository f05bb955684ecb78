#include <iostream>

#include "somos/cli.hpp"

int main(int argc, char** argv) { return somos::cli::main(argc, argv, std::cout, std::cerr); }
