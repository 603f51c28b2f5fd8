#include <iostream>
#include <string>
#include <vector>

#include "svem/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return svem::cli::run(args, std::cout, std::cerr);
}
