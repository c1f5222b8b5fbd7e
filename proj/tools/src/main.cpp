#include <iostream>

#include "nql/cli/commands.hpp"

int main(int argc, char** argv) { return nql::cli::run(argc, argv, std::cout, std::cerr); }
