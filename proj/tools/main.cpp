#include <iostream>

#include "copesim/cli.hpp"

int main(int argc, char** argv) {
    return copesim::run_cli(argc, argv, std::cout, std::cerr);
}
