#pragma once

#include <stdexcept>
#include <string>

namespace qlg {

// Invalid argument values, malformed configs, index-range violations.
// Mapped to exit code 2 by the CLI.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Tensor index/dimension mismatches. Carries the offending pair in the message.
class shape_error : public validation_error {
public:
    explicit shape_error(const std::string& what) : validation_error(what) {}
};

// Iterative solver failed to converge, SVD breakdown, etc.
// Mapped to exit code 3 by the CLI.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, int iterations, double best_residual)
        : std::runtime_error(what), iterations(iterations), best_residual(best_residual) {}
    int iterations = 0;
    double best_residual = 0.0;
};

// Request exceeds a hard resource guard (e.g. dense form of a too-large chain).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested feature is recognized but deliberately not implemented.
class unsupported_error : public std::runtime_error {
public:
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qlg
