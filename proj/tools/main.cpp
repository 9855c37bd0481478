#include "sloshing/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sloshing::cli::run(argc, argv, std::cout, std::cerr); }
