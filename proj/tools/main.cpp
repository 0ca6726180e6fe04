#include <iostream>
#include <string>
#include <vector>

#include "fintop/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto result = fintop::cli::run(args);
    std::cout << result.output;
    return result.exit_code;
}
