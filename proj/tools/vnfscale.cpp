#include <iostream>

#include "vnfscale/cli.hpp"

int main(int argc, char** argv) { return vnfscale::run_cli(argc, argv, std::cout, std::cerr); }
