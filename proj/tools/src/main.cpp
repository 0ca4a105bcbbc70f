#include "dippl_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dippl::cli::run(argc, argv, std::cout, std::cerr); }
