#include <iostream>
#include <string>
#include <vector>

#include "mctf/cli.hpp"

int main(int argc, char** argv) {
    return mctf::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
