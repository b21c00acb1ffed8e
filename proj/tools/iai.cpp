#include <iostream>

#include "iai/cli.hpp"

int main(int argc, char** argv) { return iai::cli::run(argc, argv, std::cout, std::cerr); }
