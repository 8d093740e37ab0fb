#include <iostream>

#include "acn_tools/experiment.hpp"

int main(int argc, char** argv) { return acn::tools::run_cli(argc, argv, std::cout, std::cerr); }
