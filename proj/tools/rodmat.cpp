#include <iostream>

#include "rodmat/cli.hpp"

int main(int argc, char** argv) { return rodmat::cli::run(argc, argv, std::cout, std::cerr); }
