#include <iostream>

#include "zmix/cli.hpp"

int main(int argc, char** argv) { return zmix::cli::run(argc, argv, std::cout, std::cerr); }
