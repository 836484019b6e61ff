#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qbd {

// Extended precision: the UL recursion amplifies rounding in alpha_0 by
// several orders of magnitude over twenty levels.
using Real = long double;
using Block = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline Vector ones(Eigen::Index d) { return Vector::Ones(d); }

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed input (CLI exit code 2).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Incompatible bands or block sizes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be inverted is singular to working tolerance.
/// Carries the level at which the failure happened, when known.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, std::optional<std::size_t> level = {},
                        std::string which = {})
        : Error(what), level_(level), which_(std::move(which)) {}

    std::optional<std::size_t> level() const noexcept { return level_; }
    const std::string& which() const noexcept { return which_; }

private:
    std::optional<std::size_t> level_;
    std::string which_;
};

/// A block generator could not supply the requested level.
class GeneratorError : public Error {
public:
    GeneratorError(const std::string& what, std::size_t level) : Error(what), level_(level) {}
    std::size_t level() const noexcept { return level_; }

private:
    std::size_t level_;
};

/// Iterative numerical routine failed.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A quadrature rule is not exact for the requested integrand degree.
class ExactnessError : public Error {
public:
    using Error::Error;
};

}  // namespace qbd
