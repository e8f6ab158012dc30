#include <iostream>

#include "rydgate/cli.hpp"

int main(int argc, char** argv) { return rydgate::cli::run(argc, argv, std::cout, std::cerr); }
