#include "obsa/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return obsa::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
