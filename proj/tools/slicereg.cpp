#include <iostream>
#include <string>
#include <vector>

#include "slicereg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return slicereg::run_cli(args, std::cout, std::cerr);
}
