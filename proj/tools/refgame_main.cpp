#include <iostream>

#include "refgame_cli/commands.hpp"

int main(int argc, char** argv) { return refgame::cli::run(argc, argv, std::cout, std::cerr); }
