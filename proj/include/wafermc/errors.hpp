#pragma once

#include <stdexcept>
#include <string>

namespace wafermc {

/// Rejected invariant or precondition: bad dimensions, out-of-range
/// indices, non-finite values, inconsistent arguments.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file. Messages carry "path:line" (and column where
/// meaningful) so the offending content can be located.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values produced while iterating, typically a step size too
/// large for the operator at hand.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wafermc
