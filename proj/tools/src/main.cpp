#include <iostream>

#include "optoent/cli.hpp"

int main(int argc, char** argv) { return optoent::cli::run(argc, argv, std::cout, std::cerr); }
