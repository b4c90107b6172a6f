#include "fracproj/experiment.hpp"

#include <iostream>

int main(int argc, char** argv) { return fracproj::run_cli(argc, argv, std::cout, std::cerr); }
