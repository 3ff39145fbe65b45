#include <iostream>
#include <vector>

#include "tokeval/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tokeval::run(args, std::cout, std::cerr);
}
