#pragma once

#include "zener/assembly.hpp"
#include "zener/dg_space.hpp"
#include "zener/materials.hpp"
#include "zener/mms.hpp"

#include <optional>
#include <vector>

namespace zener {

/// Errors of one half step t_{n+1/2} against an exact solution.
struct ErrorRecord {
    int n = 0;
    double t = 0.0;
    double e0 = 0.0;     ///< L2 norm of the (gamma, zeta) error
    double ediv = 0.0;   ///< L2 norm of the broken divergence of the sum error
    double ejump = 0.0;  ///< h_F^{-1/2} weighted jump norm of the sum error over interior and Neumann facets
    double E = 0.0;      ///< e0 + ediv + ejump
    double norm_sym = 0.0; ///< sqrt(e0^2 + ediv^2 + ejump^2)
    double e_dot = 0.0;  ///< L2 error of the discrete rate (X^{n+1} - X^n)/dt against the exact rate
    double e0_u = 0.0;   ///< L2 error of the postprocessed displacement (when tracked)
};

/// Errors of X^{n+1/2} = (X^n + X^{n+1})/2 at t_{n+1/2}. The rate error is
/// skipped when dt <= 0.
ErrorRecord error_norms_at_half_step(const DGSpace& space, const BlockVector& X_n, const BlockVector& X_np1,
                                     const ExactSolution& exact, double t_half, double dt);

/// Componentwise max over records of each field.
ErrorRecord max_over_steps(const std::vector<ErrorRecord>& records);

/// Experimental orders log(e_i/e_{i-1}) / log(p_i/p_{i-1}); the first entry
/// is empty. Throws std::invalid_argument for fewer than two rows, sizes
/// that differ, or parameters that are not strictly monotone.
std::vector<std::optional<double>> eoc(const std::vector<double>& errors, const std::vector<double>& params);

/// Displacement postprocessed from the discrete momentum balance
///   u^{n+1/2} = 2 u^{n-1/2} - u^{n-3/2} + (dt^2/rho) [F(t_{n-1/2}) + div_h sigma_h],
/// stored per cell as degree-k vector polynomials (layout c*d*npoly + p*npoly + i).
class DisplacementTrack {
public:
    DisplacementTrack(const DGSpace& space, const MaterialMap& materials, VectorField F, double dt);

    /// u^{-1/2} and u^{1/2} projected from an exact displacement.
    void start_exact(const VectorField& u);
    /// u^{-+1/2} = u0 -+ (dt/2) u1.
    void start_taylor(const VectorField& u0, const VectorField& u1);

    /// Computes u^{n+1/2} given the single-tensor coefficients of the stress
    /// sum used in the bracket (sigma_h^{n+1/2}, or sigma_h^{n-1/2} when
    /// centred). Must be called for n = 1, 2, ... in order.
    void advance(int n, const Eigen::VectorXd& stress_sum);

    int index() const { return n_; }
    const Eigen::VectorXd& current() const { return curr_; }
    /// Value at a physical point of cell c.
    Vec value(std::size_t c, const Vec& x) const;
    /// L2 error against u(., t).
    double l2_error(const VectorField& u, double t) const;
    /// Cell average of the displacement.
    Vec cell_average(std::size_t c) const;

private:
    Eigen::VectorXd project(const VectorField& f, double t) const;

    const DGSpace* space_;
    const MaterialMap* materials_;
    VectorField F_;
    double dt_;
    int n_ = 0; ///< index of curr_ as u^{n+1/2}
    Eigen::VectorXd prev_, curr_;
};

/// E_elast = 1/2 int A gamma : (gamma + zeta).
double elastic_energy(const DGSpace& space, const MaterialMap& materials, const BlockVector& X);

/// 1/2 x^T M x with the mixed pairing A gamma : (gamma + zeta), assembled
/// as a matrix (used to cross-check elastic_energy).
SparseMatrix elastic_energy_matrix(const DGSpace& space, const MaterialMap& materials);

struct EnergyValues {
    double E = 0.0;       ///< 1/2 A(v, v) + 1/2 |rho^{-1/2} div y|^2 + 1/2 |a^{1/2} h^{-1/2} jump y|^2
    double shifted = 0.0; ///< E - (mean{(1/rho) div y}, jump y)
    double kinetic = 0.0; ///< 1/2 A(v, v)
    double div_part = 0.0;
    double jump_part = 0.0;
    double coupling = 0.0; ///< (mean{(1/rho) div y}, jump y)
};

/// Discrete energy of the pair (X^k, X^{k+1}) with v = (X^{k+1} - X^k)/dt and
/// y = sum of X^{k+1/2}, evaluated by quadrature.
EnergyValues discrete_energy(const DGSpace& space, const MaterialMap& materials, double a, const BlockVector& X_k,
                             const BlockVector& X_kp1, double dt);

/// Shifted energy from the assembled matrices: 1/2 v^T M_A v + 1/2 y^T s y.
double shifted_energy(const DGSpace& space, const AssembledSystem& sys, const BlockVector& X_k,
                      const BlockVector& X_kp1, double dt);

/// sqrt(X^T M_A X).
double state_energy_norm(const SparseMatrix& M_A, const BlockVector& X);

/// L2 norms of gamma_h, zeta_h and their sum.
struct StressNorms {
    double gamma = 0.0, zeta = 0.0, sum = 0.0;
};
StressNorms stress_norms(const DGSpace& space, const BlockVector& X);

/// Point evaluation of the stresses.
struct StressProbe {
    int cell = -1;
    Mat3 gamma = Mat3::Zero();
    Mat3 zeta = Mat3::Zero();
    Mat3 sigma = Mat3::Zero();
};

/// Throws ConfigError if x lies outside the mesh.
int locate_probe(const Mesh& mesh, const Vec& x);
StressProbe probe_stress(const DGSpace& space, const BlockVector& X, const Vec& x, int cell = -1);

/// Cell averages of |gamma|, |zeta|, |gamma + zeta| (Frobenius).
struct CellMagnitudes {
    std::vector<double> gamma, zeta, sum;
};
CellMagnitudes cell_stress_magnitudes(const DGSpace& space, const BlockVector& X);

} // namespace zener
