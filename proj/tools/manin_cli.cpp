#include <iostream>

#include "manin/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return manin::run_cli(args, std::cout, std::cerr);
}
