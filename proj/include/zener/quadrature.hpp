#pragma once

#include "zener/types.hpp"

#include <vector>

namespace zener {

/// Quadrature on a reference simplex of dimension 1, 2 or 3: the unit
/// interval, the triangle (0,0)-(1,0)-(0,1), or the tetrahedron with
/// vertices 0, e1, e2, e3. Weights sum to the reference volume.
struct QuadratureRule {
    int dim = 0;
    int degree = 0; ///< polynomials of total degree <= degree are integrated exactly
    std::vector<Vec> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre rule with n points on [0, 1].
QuadratureRule gauss_legendre(int n);

/// Collapsed-coordinate (Duffy) Gauss rule exact to `degree` on the
/// reference simplex of dimension `dim`.
QuadratureRule simplex_rule(int dim, int degree);

/// Volume of the reference simplex: 1, 1/2, 1/6.
double reference_volume(int dim);

} // namespace zener
