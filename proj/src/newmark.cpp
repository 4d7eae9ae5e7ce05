#include "zener/newmark.hpp"

#include "zener/materials.hpp"

#include <cmath>
#include <sstream>

namespace zener {

namespace {

SolverOptions cell_blocks(SolverOptions opts, const DGSpace& space)
{
    if (opts.block_size != 0)
        opts.block_size = space.block_size();
    return opts;
}

SparseMatrix step_matrix(const AssembledSystem& sys, double dt)
{
    SparseMatrix L = (1.0 / (dt * dt)) * sys.M_A + (0.5 / dt) * sys.M_damp + 0.25 * sys.S;
    L.makeCompressed();
    return L;
}

Eigen::MatrixXd dense_block(const SparseMatrix& m, Eigen::Index off, int bs)
{
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(bs, bs);
    for (int i = 0; i < bs; ++i)
        for (SparseMatrix::InnerIterator it(m, off + i); it; ++it) {
            const auto j = it.col() - off;
            if (j >= 0 && j < bs)
                b(i, j) = it.value();
        }
    return b;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m)
{
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw NumericalError("a cell block of the mass and damping operators is not positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

} // namespace

TimeGrid::TimeGrid(double final_time, int num_steps) : T(final_time), steps(num_steps)
{
    if (!(final_time > 0.0))
        throw std::invalid_argument("final time must be positive");
    if (num_steps < 2)
        throw std::invalid_argument("the time grid needs at least two steps");
}

BlockVector l2_project_cells(const DGSpace& space,
                             const std::function<std::pair<Mat3, Mat3>(std::size_t cell, const Vec& x)>& field)
{
    BlockVector x = BlockVector::Zero(static_cast<Eigen::Index>(space.num_dofs()));
    const int np = space.npoly();
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
        const BasisValues bv = space.cell_values(c);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const auto [g, z] = field(c, bv.points[q]);
            if (!g.allFinite() || !z.allFinite())
                throw NumericalError("non-finite initial field in cell " + std::to_string(c));
            for (int a = 0; a < space.nsym(); ++a) {
                const auto pq = sym_pair(space.dim(), a);
                const Eigen::VectorXd phi = bv.weights[q] * bv.phi.row(q).transpose();
                x.segment(static_cast<Eigen::Index>(space.gamma_offset(c)) + a * np, np) += g(pq[0], pq[1]) * phi;
                x.segment(static_cast<Eigen::Index>(space.zeta_offset(c)) + a * np, np) += z(pq[0], pq[1]) * phi;
            }
        }
    }
    return x;
}

NewmarkIntegrator::NewmarkIntegrator(const DGSpace& space, const AssembledSystem& system, const TimeGrid& grid,
                                     LoadProvider load, NewmarkOptions opts)
    : space_(&space), system_(&system), grid_(grid), load_(std::move(load)), opts_(opts),
      L_(step_matrix(system, grid.dt())),
      K_([&] {
          const double dt = grid.dt();
          const int bs = space.block_size();
          const std::size_t nc = space.mesh().num_cells();
          if (static_cast<std::size_t>(system.s_sum.rows()) != space.num_sum_dofs())
              throw std::invalid_argument("the assembled system lacks the single-tensor stiffness");
          std::vector<Triplet> trip;
          trip.reserve(nc * static_cast<std::size_t>(bs * bs));
          Dg_inv_.resize(nc);
          Dz_inv_.resize(nc);
          W_inv_.resize(nc);
          for (std::size_t c = 0; c < nc; ++c) {
              const auto g = static_cast<Eigen::Index>(space.gamma_offset(c));
              const auto z = static_cast<Eigen::Index>(space.zeta_offset(c));
              Dg_inv_[c] = spd_inverse(dense_block(system.M_A, g, bs) / (dt * dt));
              Dz_inv_[c] = spd_inverse(dense_block(system.M_A, z, bs) / (dt * dt)
                                       + dense_block(system.M_damp, z, bs) * (0.5 / dt));
              W_inv_[c] = spd_inverse(Dg_inv_[c] + Dz_inv_[c]);
              const auto o = static_cast<int>(space.sum_offset(c));
              for (int i = 0; i < bs; ++i)
                  for (int j = 0; j < bs; ++j)
                      trip.emplace_back(o + i, o + j, W_inv_[c](i, j));
          }
          SparseMatrix w(system.s_sum.rows(), system.s_sum.cols());
          w.setFromTriplets(trip.begin(), trip.end());
          SparseMatrix k = w + 0.25 * system.s_sum;
          k.makeCompressed();
          return k;
      }()),
      solver_(K_, cell_blocks(opts.solver, space))
{
}

BlockVector NewmarkIntegrator::solve_step(const BlockVector& rhs)
{
    const int bs = space_->block_size();
    const std::size_t nc = space_->mesh().num_cells();
    Eigen::VectorXd y(static_cast<Eigen::Index>(space_->num_sum_dofs()));
    for (std::size_t c = 0; c < nc; ++c) {
        const auto g = static_cast<Eigen::Index>(space_->gamma_offset(c));
        const auto z = static_cast<Eigen::Index>(space_->zeta_offset(c));
        y.segment(static_cast<Eigen::Index>(space_->sum_offset(c)), bs)
            = W_inv_[c] * (Dg_inv_[c] * rhs.segment(g, bs) + Dz_inv_[c] * rhs.segment(z, bs));
    }
    const Eigen::VectorXd sigma = solver_.solve(y);
    const Eigen::VectorXd s_sigma = 0.25 * (system_->s_sum * sigma);
    BlockVector x(rhs.size());
    for (std::size_t c = 0; c < nc; ++c) {
        const auto g = static_cast<Eigen::Index>(space_->gamma_offset(c));
        const auto z = static_cast<Eigen::Index>(space_->zeta_offset(c));
        const auto sc = s_sigma.segment(static_cast<Eigen::Index>(space_->sum_offset(c)), bs);
        x.segment(g, bs) = Dg_inv_[c] * (rhs.segment(g, bs) - sc);
        x.segment(z, bs) = Dz_inv_[c] * (rhs.segment(z, bs) - sc);
    }
    return x;
}

NewmarkState NewmarkIntegrator::startup_exact(const PairField& exact) const
{
    NewmarkState s;
    s.X_prev = l2_project(*space_, exact, grid_.t(0));
    s.X_curr = l2_project(*space_, exact, grid_.t(1));
    s.k = 1;
    return s;
}

NewmarkState NewmarkIntegrator::startup_initial(const InitialData& data, const MaterialMap& materials) const
{
    if (!data.sigma0)
        throw ConfigError("application startup needs the initial stress sigma0");
    const Mesh& mesh = space_->mesh();
    const int d = space_->dim();
    auto strain = [](const TensorField& f, const Vec& x) -> Mat3 { return f ? f(x, 0.0) : Mat3::Zero(); };

    NewmarkState s;
    s.X_prev = l2_project_cells(*space_, [&](std::size_t c, const Vec& x) {
        const MaterialRegion& m = materials.at(mesh.region(c));
        const Mat3 g0 = apply_hooke(m.law_C, strain(data.strain0, x), d);
        return std::make_pair(g0, Mat3(data.sigma0(x, 0.0) - g0));
    });
    const BlockVector rate = l2_project_cells(*space_, [&](std::size_t c, const Vec& x) {
        const MaterialRegion& m = materials.at(mesh.region(c));
        const Mat3 e1 = strain(data.strain1, x);
        const Mat3 g0 = apply_hooke(m.law_C, strain(data.strain0, x), d);
        const Mat3 z0 = data.sigma0(x, 0.0) - g0;
        const Mat3 g1 = apply_hooke(m.law_C, e1, d);
        const Mat3 z1 = apply_hooke(m.law_D, e1, d) - g1 - z0 / m.omega;
        return std::make_pair(g1, z1);
    });
    s.X_curr = s.X_prev + grid_.dt() * rate;
    s.k = 1;
    return s;
}

const BlockVector& NewmarkIntegrator::load_at_node(int k)
{
    for (const auto& [idx, v] : load_cache_)
        if (idx == k)
            return v;
    BlockVector v = load_ ? load_(grid_.t(k)) : BlockVector::Zero(static_cast<Eigen::Index>(space_->num_dofs()));
    load_cache_.emplace_back(k, std::move(v));
    while (load_cache_.size() > 3)
        load_cache_.pop_front();
    return load_cache_.back().second;
}

BlockVector NewmarkIntegrator::step_load(int k)
{
    if (opts_.load_at_tk)
        return load_at_node(k);
    BlockVector b = 0.25 * load_at_node(k - 1);
    b += 0.5 * load_at_node(k);
    b += 0.25 * load_at_node(k + 1);
    return b;
}

double NewmarkIntegrator::scheme_residual(const BlockVector& Xm, const BlockVector& X, const BlockVector& Xp,
                                          const BlockVector& b) const
{
    const double dt = grid_.dt();
    const auto& M = system_->M_A;
    const auto& C = system_->M_damp;
    const auto& S = system_->S;
    const BlockVector MXm = M * Xm, MX = M * X, MXp = M * Xp;
    const BlockVector CXm = C * Xm, CXp = C * Xp;
    const BlockVector SXm = S * Xm, SX = S * X, SXp = S * Xp;

    const BlockVector r = (MXp - 2.0 * MX + MXm) / (dt * dt) + (CXp - CXm) / (2.0 * dt)
                          + 0.25 * (SXp + 2.0 * SX + SXm) - b;
    // scale of the individual terms, so that cancellation does not inflate the ratio
    const double scale = (MXp.norm() + 2.0 * MX.norm() + MXm.norm()) / (dt * dt)
                         + (CXp.norm() + CXm.norm()) / (2.0 * dt)
                         + 0.25 * (SXp.norm() + 2.0 * SX.norm() + SXm.norm()) + b.norm();
    return scale > 0.0 ? r.norm() / scale : 0.0;
}

void NewmarkIntegrator::step(NewmarkState& state)
{
    const int k = state.k;
    if (k + 1 > grid_.steps)
        throw std::logic_error("step beyond the final time");
    const double dt = grid_.dt();
    const BlockVector b = step_load(k);

    const auto& M = system_->M_A;
    const auto& C = system_->M_damp;
    const auto& S = system_->S;
    BlockVector rhs = b;
    rhs += M * ((2.0 / (dt * dt)) * state.X_curr - (1.0 / (dt * dt)) * state.X_prev);
    rhs += C * ((0.5 / dt) * state.X_prev);
    rhs -= S * (0.5 * state.X_curr + 0.25 * state.X_prev);

    BlockVector next;
    try {
        next = solve_step(rhs);
        // The cellwise elimination amplifies the backward error of the reduced
        // solve by roughly |s W|; a few refinement sweeps on L recover it.
        const double target = 1e-14 * rhs.norm();
        for (int sweep = 0; sweep < 3; ++sweep) {
            const BlockVector res = rhs - L_ * next;
            if (res.norm() <= target)
                break;
            next += solve_step(res);
        }
    } catch (const ConvergenceError& e) {
        throw ConvergenceError("step " + std::to_string(k + 1) + ": " + e.what(), e.residual());
    }

    if (opts_.check_residual) {
        const double res = scheme_residual(state.X_prev, state.X_curr, next, b);
        max_residual_ = std::max(max_residual_, res);
        if (res > opts_.residual_tol) {
            std::ostringstream os;
            os << "step " << k + 1 << ": scheme residual " << res << " exceeds " << opts_.residual_tol;
            throw NumericalError(os.str());
        }
    }
    state.X_prev = std::move(state.X_curr);
    state.X_curr = std::move(next);
    state.k = k + 1;
}

void NewmarkIntegrator::run(NewmarkState& state, const std::vector<StepObserver>& observers)
{
    while (state.k < grid_.steps) {
        BlockVector before = state.X_prev;
        step(state);
        const StepView view{state.k - 1, grid_.t(state.k), before, state.X_prev, state.X_curr};
        for (const auto& obs : observers) {
            try {
                obs(view);
            } catch (const std::exception& e) {
                throw std::runtime_error("observer failed after step " + std::to_string(state.k) + ": " + e.what());
            }
        }
    }
}

} // namespace zener
