#include <iostream>
#include <string>
#include <vector>

#include "gstbn/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return gstbn::cli::run(args, std::cout, std::cerr);
}
