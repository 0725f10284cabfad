#include <iostream>

#include "readability/cli.hpp"

int main(int argc, char** argv) { return readability::cli::run(argc, argv, std::cout, std::cerr); }
