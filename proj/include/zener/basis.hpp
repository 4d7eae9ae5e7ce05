#pragma once

#include "zener/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace zener {

/// Monomials of total degree <= k on the reference simplex, orthonormalized
/// in L2(reference simplex) when the basis is built.
class ScalarBasis {
public:
    ScalarBasis() = default;
    ScalarBasis(int dim, int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exponents_.size()); }

    /// Values of all modes at reference point xi.
    Eigen::VectorXd values(const Vec& xi) const;
    /// Reference gradients, one row per mode, three columns (unused ones zero).
    Eigen::Matrix<double, Eigen::Dynamic, 3> gradients(const Vec& xi) const;

    /// Number of polynomials of total degree <= k in `dim` variables.
    static int dimension(int dim, int degree);

private:
    Eigen::VectorXd monomials(const Vec& xi) const;
    Eigen::Matrix<double, Eigen::Dynamic, 3> monomial_gradients(const Vec& xi) const;

    int dim_ = 0;
    int degree_ = 0;
    std::vector<std::array<int, 3>> exponents_;
    Eigen::MatrixXd coeffs_; ///< mode i = sum_j coeffs_(i, j) * monomial j
};

} // namespace zener
