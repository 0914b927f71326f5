#include "triage/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return triage::run_cli(argc, argv, std::cout, std::cerr);
}
