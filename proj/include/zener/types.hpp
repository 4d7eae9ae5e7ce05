#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <stdexcept>
#include <string>

namespace zener {

// Points and vectors are always stored with three components; in 2D the z
// entry is zero. The affine cell maps embed 2D cells with a unit z-axis so
// that determinants and inverses work uniformly.
using Vec = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Scalar-in-time vector field, e.g. a body force F(x, t).
using VectorField = std::function<Vec(const Vec& x, double t)>;

/// Boundary traction g_N(x, n, t); n is the unit outward normal.
using TractionField = std::function<Vec(const Vec& x, const Vec& n, double t)>;

// Error taxonomy. Invalid arguments use std::invalid_argument directly.

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MaterialError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace zener
