#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsbc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A temperature (or other argument) outside the validity range of a model.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An iterative method stopped without meeting its tolerance.
class IterationError : public Error {
public:
    IterationError(const std::string &what, int iterations, double residual)
        : Error(what + " after " + std::to_string(iterations) +
                " iterations (last residual " + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

} // namespace hsbc
