#include <iostream>
#include <vector>

#include "flk/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flk::run(args, std::cout, std::cerr);
}
