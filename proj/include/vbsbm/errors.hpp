#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vbsbm {

/// Argument outside the domain of a mathematical function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid model or algorithm parameter.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A non-finite value appeared during an iterative computation.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// A brute-force computation would exceed its configured budget.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace vbsbm
