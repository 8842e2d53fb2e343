#include <iostream>

#include "strandcc/app/commands.hpp"

int main(int argc, char** argv) { return strandcc::app::run_cli(argc, argv, std::cout, std::cerr); }
