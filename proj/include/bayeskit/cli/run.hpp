#pragma once

#include <string>
#include <vector>

namespace bayeskit::cli {

struct Outcome {
    int exit_code = 0;
    std::string stdout_text;
    std::string stderr_text;
};

// Runs the command line given as argv[1..] and captures both output streams.
Outcome main_with_args(const std::vector<std::string>& args);

}  // namespace bayeskit::cli
