#include <iostream>

#include "hott/frontend.hpp"

int main(int argc, char** argv) { return hott::run_cli(argc, argv, std::cout, std::cerr); }
