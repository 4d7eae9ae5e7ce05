#pragma once

#include "zener/assembly.hpp"
#include "zener/dg_space.hpp"
#include "zener/materials.hpp"

#include <array>
#include <functional>

namespace zener {

/// Spatial displacement profile with analytic derivatives.
struct DisplacementProfile {
    std::function<Vec(const Vec&)> value;
    /// G(i, j) = d U_i / d x_j
    std::function<Mat3(const Vec&)> gradient;
    /// H[i](j, k) = d^2 U_i / (d x_j d x_k)
    std::function<std::array<Mat3, 3>(const Vec&)> hessian;
};

/// Closed-form solution bundle for manufactured-solution runs. Carries its
/// own material and penalty parameters.
struct ExactSolution {
    int dim = 2;
    MaterialRegion region;
    double a_star = 1.0;

    VectorField u, u_dot, u_ddot;
    TensorField gamma, zeta;
    TensorField gamma_dot, zeta_dot;
    VectorField div_sigma; ///< div(gamma + zeta)
    VectorField F;
    VectorField g_D, g_D_ddot;
    TractionField g_N; ///< (gamma + zeta) n

    Mat3 sigma(const Vec& x, double t) const { return gamma(x, t) + zeta(x, t); }
    PairField pair() const;
    PairField pair_dot() const;
    MaterialMap materials() const { return uniform_materials(region, dim); }
};

/// u = c e^{-t} U(x), gamma = C eps(u), zeta = beta (D - C) eps(u) with
/// beta = omega / (omega - 1). Throws std::invalid_argument for omega = 1.
ExactSolution zener_exponential_mms(const DisplacementProfile& profile, double c, const MaterialRegion& region,
                                    int dim, double a_star);

/// Materials of the space-convergence study: C from (E, nu) = (1, 0.25),
/// D from (10, 0.4), rho = 1, omega = 0.01.
MaterialRegion space_test_materials();
/// Materials of the time-convergence study: C from (10, 0.4), D from
/// (20, 0.45), rho = 1, omega = 2.
MaterialRegion time_test_materials();

/// 2 e^{-t} (cos(pi x) sin(pi y) + x^2/s, -sin(pi x) cos(pi y) + y^2/s),
/// s = lambda_C + lambda_D. Penalty scale a* = 5.
ExactSolution example1_space_solution(const MaterialRegion& region = space_test_materials());

/// e^{-t} (xy + x^2/s, xy + y^2/s). Penalty scale a* = 10.
ExactSolution example1_time_solution(const MaterialRegion& region = time_test_materials());

/// Load data for the solution: body force, Dirichlet data with analytic
/// second derivative, Neumann traction.
LoadData load_data(const ExactSolution& exact);

} // namespace zener
