#include <iostream>
#include <string>
#include <vector>

#include "jetbranch/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return jetbranch::cli::run(std::move(args), std::cout, std::cerr);
}
