#include <iostream>

#include "homeplan/cli/app.hpp"

int main(int argc, char** argv) { return homeplan::cli::main_entry(argc, argv, {std::cin, std::cout, std::cerr}); }
