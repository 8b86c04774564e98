#pragma once

#include <stdexcept>
#include <string>

namespace optocorr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid physical parameters (sign constraints, bad ranges).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Malformed or incomplete configuration / command line.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Base for every failure of a numerical routine.
class NumericError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public NumericError {
public:
    NonConvergence(const std::string& what, double residual, int iterations)
        : NumericError(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

class UnstableDrift : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularSystem : public NumericError {
public:
    using NumericError::NumericError;
};

// Argument outside the mathematical domain of a formula (unphysical CM).
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace optocorr
