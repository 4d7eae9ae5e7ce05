#pragma once

#include "zener/types.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace zener {

/// `automatic` factorizes systems up to `direct_limit` unknowns and runs
/// preconditioned CG on larger ones. The direct method uses CHOLMOD's
/// supernodal Cholesky when the library was found at configure time and
/// Eigen's simplicial LDLT otherwise.
enum class SolverMethod { automatic, conjugate_gradient, direct };

struct SolverOptions {
    SolverMethod method = SolverMethod::automatic;
    int direct_limit = 150000;
    double tol = 1e-10;
    /// <= 0 selects max(100, 2N).
    int max_iterations = 0;
    /// Size of the diagonal blocks of the block-Jacobi preconditioner
    /// (one cell's dofs); 1 gives point Jacobi, 0 disables preconditioning.
    int block_size = 1;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Reusable solver for a fixed SPD matrix.
class SolverHandle {
public:
    SolverHandle(SolverHandle&&) noexcept;
    ~SolverHandle();
    /// Factorizes the preconditioner blocks (or the full matrix for the
    /// direct method). Throws NumericalError if L is found not to be SPD.
    SolverHandle(const SparseMatrix& L, const SolverOptions& opts);

    /// Throws ConvergenceError when the iteration limit is hit.
    Eigen::VectorXd solve(const Eigen::VectorXd& b);

    const SolveStats& last_stats() const { return stats_; }
    long total_iterations() const { return total_iterations_; }
    const SolverOptions& options() const { return opts_; }
    /// Name of the backend in use ("cg", "cholmod" or "simplicial_ldlt").
    const char* backend() const;
    std::size_t size() const { return static_cast<std::size_t>(L_.rows()); }

private:
    void apply_preconditioner(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

    SparseMatrix L_;
    SolverOptions opts_;
    int max_it_ = 0;
    std::vector<Eigen::LLT<Eigen::MatrixXd>> blocks_;
    struct DirectFactor;
    std::unique_ptr<DirectFactor> direct_;
    SolveStats stats_;
    long total_iterations_ = 0;
};

SolverHandle setup_solver(const SparseMatrix& L, const SolverOptions& opts = {});

} // namespace zener
