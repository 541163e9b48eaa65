#include <iostream>

#include "cva/cli/app.hpp"

int main(int argc, char** argv) { return cva::cli::run(argc, argv, std::cout, std::cerr); }
