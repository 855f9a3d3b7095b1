#pragma once

#include <stdexcept>
#include <string>

namespace simons {

// Bad arguments, violated preconditions, malformed configuration.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Integration/iteration failed to converge, left its domain, or hit a
// numerically degenerate configuration.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace simons
