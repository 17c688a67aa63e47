#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bayeskit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;    // unreadable, malformed or schema-invalid input
inline constexpr int kExitNumeric = 3;  // domain or numeric failure inside the library

// Malformed input that is not a spec schema violation (data files, flags).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every schema problem found in a spec file.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

}  // namespace bayeskit::cli
