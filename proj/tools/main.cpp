#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sphcover::cli::run(argc, argv, std::cout, std::cerr); }
