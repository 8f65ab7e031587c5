#include <iostream>

#include "scottshift/cli.hpp"

int main(int argc, char** argv) { return scottshift::cli::run(argc, argv, std::cout, std::cerr); }
