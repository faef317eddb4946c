#pragma once

#include <stdexcept>
#include <string>

namespace crisp {

// Shape/dimension violations (bad matmul operands, reshape mismatch, ...).
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or parameters (s not dividing d_in*d_out, k > n, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: NaN in a loss, divergence, iteration cap exceeded.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace crisp
