#include <iostream>

#include "vesselcut/cli.hpp"

int main(int argc, char** argv)
{
    return vesselcut::cli::run(argc, argv, std::cout, std::cerr);
}
