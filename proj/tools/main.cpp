#include <iostream>
#include <string>
#include <vector>

#include "drinfeld/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return drinfeld::run_cli(args, std::cout, std::cerr);
}
