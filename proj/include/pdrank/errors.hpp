#pragma once

#include <stdexcept>
#include <string>

namespace pdrank {

/// Malformed or inconsistent input data (bad CSV rows, invalid indices, ties).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameters supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver left its convergence region. For PDHG this means the step-size
/// contract was violated; for the kernels it means an internal bug.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative method hit its iteration cap without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pdrank
