#include <iostream>
#include <string>
#include <vector>

#include "opsw/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return opsw::cli::run_cli(args, std::cout, std::cerr);
}
