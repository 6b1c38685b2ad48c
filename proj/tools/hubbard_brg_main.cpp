#include <iostream>

#include "hubbard_brg/cli.hpp"

int main(int argc, char** argv) { return hbrg::cli::main_with_args(argc, argv, std::cout, std::cerr); }
