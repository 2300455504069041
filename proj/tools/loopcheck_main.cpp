#include <iostream>

#include "loopcheck/cli/app.hpp"

int main(int argc, char** argv) {
    return loopcheck::cli::run_cli(argc, argv, std::cout, std::cerr);
}
