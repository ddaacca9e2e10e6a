#include <iostream>
#include <vector>

#include "ilt/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ilt::run_command(args, std::cout, std::cerr);
}
