#include <iostream>

#include "tsfcde/cli/commands.hpp"

int main(int argc, char** argv)
{
    return tsfcde::cli::run(argc, argv, std::cout, std::cerr);
}
