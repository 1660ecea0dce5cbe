#include <iostream>

#include "dstable/cli.hpp"

int main(int argc, char** argv) { return dstable::run(argc, argv, std::cout, std::cerr); }
