#include <iostream>

#include "rscalc/cli.h"

int main(int argc, char** argv) { return rscalc::cli_main(argc, argv, std::cout, std::cerr); }
