#pragma once

#include "zener/dg_space.hpp"
#include "zener/materials.hpp"

namespace zener {

/// Boundary and volume data entering the load vector. Empty callbacks mean
/// zero data. When g_D is given without g_D_ddot, the second time
/// derivative is taken by central differences with step `fd_step`.
struct LoadData {
    VectorField F;
    VectorField g_D;
    VectorField g_D_ddot;
    TractionField g_N;
    double fd_step = 0.0;
};

struct AssemblyOptions {
    int workers = 1;
    /// Drop the adjoint-consistency Neumann data term.
    bool strict_paper_bc = false;
    /// Quadrature degree for load terms; < 0 uses the space default.
    int load_quad_degree = -1;
};

/// Block-diagonal mass of A((g, z), (h, t)) = (A g, h) + (V z, t).
SparseMatrix assemble_mass_A(const DGSpace& space, const MaterialMap& materials);

/// ((1/omega) V z, t); zero on the gamma block.
SparseMatrix assemble_damping(const DGSpace& space, const MaterialMap& materials);

/// Pieces of the single-tensor stiffness form s(sigma, tau).
struct StiffnessParts {
    SparseMatrix volume;      ///< (1/rho div sigma, div tau)
    SparseMatrix consistency; ///< -(mean{(1/rho) div sigma}, jump tau) - (mean{(1/rho) div tau}, jump sigma)
    SparseMatrix penalty;     ///< (a / h_F jump sigma, jump tau)

    SparseMatrix total() const { return volume + consistency + penalty; }
};

/// Throws ConfigError if a boundary facet is unclassified.
StiffnessParts assemble_stiffness_parts(const DGSpace& space, const MaterialMap& materials, double a,
                                        const AssemblyOptions& opts = {});

/// [[s, s], [s, s]] on the (gamma, zeta) layout.
SparseMatrix replicate_blocks(const DGSpace& space, const SparseMatrix& s);

SparseMatrix assemble_stiffness(const DGSpace& space, const MaterialMap& materials, double a,
                                const AssemblyOptions& opts = {});

/// Load tested against single tensors tau, at time t.
Eigen::VectorXd assemble_load_sum(const DGSpace& space, const MaterialMap& materials, const LoadData& data,
                                  double a, double t, const AssemblyOptions& opts = {});

/// Load on the (gamma, zeta) layout; both blocks receive the same values.
BlockVector assemble_load(const DGSpace& space, const MaterialMap& materials, const LoadData& data, double a,
                          double t, const AssemblyOptions& opts = {});

struct AssembledSystem {
    SparseMatrix M_A;
    SparseMatrix M_damp;
    SparseMatrix S;
    SparseMatrix s_sum; ///< single-tensor stiffness
    double a = 0.0;
};

AssembledSystem assemble_system(const DGSpace& space, const MaterialMap& materials, double a,
                                const AssemblyOptions& opts = {});

/// Penalty rule a = a* k^2.
inline double penalty_from_scale(double a_star, int k) { return a_star * k * k; }

} // namespace zener
