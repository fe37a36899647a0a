#include <iostream>

#include "bgi/commands.hpp"

int main(int argc, char** argv)
{
    return bgi::run_cli(argc, argv, std::cout, std::cerr);
}
