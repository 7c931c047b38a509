#include <iostream>

#include "aoa/cli.hpp"

int main(int argc, char** argv)
{
    return aoa::cli_main(argc, argv, std::cout, std::cerr);
}
