#pragma once

#include "zener/assembly.hpp"
#include "zener/dg_space.hpp"
#include "zener/linsolve.hpp"

#include <deque>
#include <functional>
#include <optional>

namespace zener {

/// Uniform partition t_k = k dt of [0, T].
struct TimeGrid {
    double T = 1.0;
    int steps = 2;

    TimeGrid() = default;
    /// Throws std::invalid_argument unless T > 0 and steps >= 2.
    TimeGrid(double final_time, int num_steps);

    double dt() const { return T / steps; }
    double t(int k) const { return k * dt(); }
    double half(int k) const { return (k + 0.5) * dt(); }
};

/// Two consecutive discrete states (X^{k-1}, X^k).
struct NewmarkState {
    BlockVector X_prev;
    BlockVector X_curr;
    int k = 1;
};

/// Initial data for application runs. Strains default to zero when absent.
struct InitialData {
    VectorField u0;        ///< initial displacement
    VectorField u1;        ///< initial velocity
    TensorField strain0;   ///< eps(u0)
    TensorField strain1;   ///< eps(u1)
    TensorField sigma0;    ///< initial total stress (required)
};

struct NewmarkOptions {
    /// Sample loads at t_k instead of the (1/4, 1/2, 1/4) hat combination.
    bool load_at_tk = false;
    SolverOptions solver;
    /// Check every step by substituting the states back into the scheme.
    bool check_residual = true;
    /// Accepted relative scheme residual.
    double residual_tol = 1e-9;
};

/// Load of the (gamma, zeta) layout at time t.
using LoadProvider = std::function<BlockVector(double t)>;

/// What observers see after each step: X^{k-1}, X^k, X^{k+1}.
struct StepView {
    int k = 0; ///< index of X^k (the middle state)
    double t_next = 0.0;
    const BlockVector& X_prev;
    const BlockVector& X_curr;
    const BlockVector& X_next;
};

using StepObserver = std::function<void(const StepView&)>;

class NewmarkIntegrator {
public:
    NewmarkIntegrator(const DGSpace& space, const AssembledSystem& system, const TimeGrid& grid,
                      LoadProvider load, NewmarkOptions opts = {});

    const TimeGrid& grid() const { return grid_; }
    const SparseMatrix& step_operator() const { return L_; }
    /// Operator on the sums gamma + zeta that the solver actually factorizes:
    /// blockdiag(W^-1) + s/4 with W = Dg^-1 + Dz^-1, where Dg and Dz are the
    /// cell blocks of M/dt^2 + C/(2dt) on gamma and zeta. Eliminating gamma
    /// and zeta cellwise from L X = r leaves this SPD system of half the size.
    const SparseMatrix& reduced_operator() const { return K_; }
    const AssembledSystem& system() const { return *system_; }
    const SolverHandle& solver() const { return solver_; }

    /// X^0 = P(exact(0)), X^1 = P(exact(t_1)).
    NewmarkState startup_exact(const PairField& exact) const;
    /// gamma_0 = C eps(u0), zeta_0 = sigma0 - gamma_0, gamma_1 = C eps(u1),
    /// zeta_1 = D eps(u1) - gamma_1 - zeta_0 / omega, X^1 = X^0 + dt P(gamma_1, zeta_1).
    NewmarkState startup_initial(const InitialData& data, const MaterialMap& materials) const;

    /// Advances the state by one step: afterwards state.X_curr holds X^{k+1}
    /// and state.X_prev the former X^k.
    void step(NewmarkState& state);

    /// Runs until k = steps, invoking observers after each step.
    void run(NewmarkState& state, const std::vector<StepObserver>& observers = {});

    /// Relative residual of the scheme for the triple and load b_k.
    double scheme_residual(const BlockVector& Xm, const BlockVector& X, const BlockVector& Xp,
                           const BlockVector& b) const;

    /// Load b_k used at step k (hat combination or plain t_k).
    BlockVector step_load(int k);

    double max_residual() const { return max_residual_; }

private:
    const BlockVector& load_at_node(int k);

    const DGSpace* space_;
    const AssembledSystem* system_;
    TimeGrid grid_;
    LoadProvider load_;
    NewmarkOptions opts_;
    BlockVector solve_step(const BlockVector& rhs);

    SparseMatrix L_;
    std::vector<Eigen::MatrixXd> Dg_inv_, Dz_inv_, W_inv_;
    SparseMatrix K_;
    SolverHandle solver_;
    std::deque<std::pair<int, BlockVector>> load_cache_;
    double max_residual_ = 0.0;
};

/// Cellwise L2 projection of a pair field that depends on the cell.
BlockVector l2_project_cells(const DGSpace& space,
                             const std::function<std::pair<Mat3, Mat3>(std::size_t cell, const Vec& x)>& field);

} // namespace zener
