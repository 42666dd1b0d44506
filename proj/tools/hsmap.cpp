#include <iostream>

#include "hsmap/cli.hpp"

int main(int argc, char** argv) { return hsmap::main_entry(argc, argv, std::cout, std::cerr); }
