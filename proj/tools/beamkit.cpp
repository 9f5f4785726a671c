#include <iostream>

#include "beamkit/cli.hpp"

int main(int argc, char** argv) { return beamkit::cli::run(argc, argv, std::cout, std::cerr); }
