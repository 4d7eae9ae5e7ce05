#include "zener/linsolve.hpp"

#include <Eigen/SparseCholesky>
#ifdef ZENER_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include <cmath>
#include <sstream>

namespace zener {

struct SolverHandle::DirectFactor {
#ifdef ZENER_HAVE_CHOLMOD
    Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>> llt;
#else
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
#endif
};

SolverHandle::SolverHandle(SolverHandle&&) noexcept = default;
SolverHandle::~SolverHandle() = default;

const char* SolverHandle::backend() const
{
#ifdef ZENER_HAVE_CHOLMOD
    return direct_ ? "cholmod" : "cg";
#else
    return direct_ ? "simplicial_ldlt" : "cg";
#endif
}

namespace {

const char* const kSpdAdvice =
    "the step operator is not positive definite; the penalty is probably too small "
    "(increase a* in the rule a = a* k^2)";

} // namespace

SolverHandle::SolverHandle(const SparseMatrix& L, const SolverOptions& opts) : L_(L), opts_(opts)
{
    if (L.rows() != L.cols())
        throw std::invalid_argument("solver setup: matrix must be square");
    if (!(opts.tol > 0.0))
        throw std::invalid_argument("solver setup: tolerance must be positive");
    const auto n = L.rows();
    max_it_ = opts.max_iterations > 0 ? opts.max_iterations
                                      : std::max(100, 2 * static_cast<int>(n));

    if (opts_.method == SolverMethod::automatic)
        opts_.method = n <= opts.direct_limit ? SolverMethod::direct : SolverMethod::conjugate_gradient;

    if (opts_.method == SolverMethod::direct) {
        direct_ = std::make_unique<DirectFactor>();
#ifdef ZENER_HAVE_CHOLMOD
        direct_->llt.compute(Eigen::SparseMatrix<double>(L));
        if (direct_->llt.info() != Eigen::Success)
            throw NumericalError(kSpdAdvice);
#else
        direct_->ldlt.compute(Eigen::SparseMatrix<double>(L));
        if (direct_->ldlt.info() != Eigen::Success || (direct_->ldlt.vectorD().array() <= 0.0).any())
            throw NumericalError(kSpdAdvice);
#endif
        return;
    }

    const int bs = opts.block_size;
    if (bs <= 0)
        return;
    if (n % bs != 0)
        throw std::invalid_argument("solver setup: block size does not divide the matrix size");
    const auto nb = n / bs;
    blocks_.reserve(static_cast<std::size_t>(nb));
    for (Eigen::Index b = 0; b < nb; ++b) {
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(bs, bs);
        for (int i = 0; i < bs; ++i)
            for (SparseMatrix::InnerIterator it(L_, b * bs + i); it; ++it) {
                const auto j = it.col() - b * bs;
                if (j >= 0 && j < bs)
                    block(i, j) = it.value();
            }
        blocks_.emplace_back(block);
        if (blocks_.back().info() != Eigen::Success) {
            std::ostringstream os;
            os << kSpdAdvice << " (diagonal block " << b << " failed to factorize)";
            throw NumericalError(os.str());
        }
    }
}

void SolverHandle::apply_preconditioner(const Eigen::VectorXd& r, Eigen::VectorXd& z) const
{
    if (blocks_.empty()) {
        z = r;
        return;
    }
    const int bs = opts_.block_size;
    z.resize(r.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto off = static_cast<Eigen::Index>(b) * bs;
        z.segment(off, bs) = blocks_[b].solve(r.segment(off, bs));
    }
}

Eigen::VectorXd SolverHandle::solve(const Eigen::VectorXd& b)
{
    if (b.size() != L_.rows())
        throw std::invalid_argument("solve: right-hand side has the wrong size");
    if (!b.allFinite())
        throw NumericalError("solve: right-hand side is not finite");
    stats_ = {};
    const double bnorm = b.norm();
    if (bnorm == 0.0)
        return Eigen::VectorXd::Zero(b.size());

    if (direct_) {
#ifdef ZENER_HAVE_CHOLMOD
        Eigen::VectorXd x = direct_->llt.solve(b);
#else
        Eigen::VectorXd x = direct_->ldlt.solve(b);
#endif
        stats_.iterations = 1;
        stats_.relative_residual = (b - L_ * x).norm() / bnorm;
        return x;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b, z, p, Lp;
    apply_preconditioner(r, z);
    p = z;
    double rz = r.dot(z);
    double rnorm = bnorm;
    for (int it = 1; it <= max_it_; ++it) {
        Lp.noalias() = L_ * p;
        const double pLp = p.dot(Lp);
        if (!(pLp > 0.0))
            throw NumericalError(kSpdAdvice);
        const double alpha = rz / pLp;
        x += alpha * p;
        r -= alpha * Lp;
        rnorm = r.norm();
        if (rnorm <= opts_.tol * bnorm) {
            stats_.iterations = it;
            stats_.relative_residual = rnorm / bnorm;
            total_iterations_ += it;
            return x;
        }
        apply_preconditioner(r, z);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    stats_.iterations = max_it_;
    stats_.relative_residual = rnorm / bnorm;
    throw ConvergenceError("conjugate gradient did not converge in " + std::to_string(max_it_)
                               + " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")",
                           rnorm / bnorm);
}

SolverHandle setup_solver(const SparseMatrix& L, const SolverOptions& opts)
{
    return SolverHandle(L, opts);
}

} // namespace zener
