#include <iostream>
#include <string>
#include <vector>

#include "bayeskit/cli/run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const bayeskit::cli::Outcome out = bayeskit::cli::main_with_args(args);
    std::cout << out.stdout_text;
    std::cerr << out.stderr_text;
    return out.exit_code;
}
