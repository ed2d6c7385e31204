#include <iostream>

#include "msent/cli/app.hpp"

int main(int argc, char** argv) { return msent::cli::run(argc, argv, std::cout, std::cerr); }
