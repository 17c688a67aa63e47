#pragma once

#include <stdexcept>
#include <string>

namespace bayeskit {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// An iterative method failed to reach its tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

// A requested moment does not exist for the given parameters.
class MomentError : public Error {
public:
    using Error::Error;
};

// The model is not regular enough for Fisher information to be defined.
class RegularityError : public Error {
public:
    using Error::Error;
};

// An improper prior combined with the data does not yield a proper posterior.
class ProprietyError : public Error {
public:
    using Error::Error;
};

}  // namespace bayeskit
