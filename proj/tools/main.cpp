#include "continuized/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return continuized::cli_main(argc, argv, std::cout, std::cerr);
}
