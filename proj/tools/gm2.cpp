#include <iostream>
#include <string>
#include <vector>

#include "gm2/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return gm2::cli::run(args, std::cout, std::cerr);
}
