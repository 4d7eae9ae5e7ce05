#include "zener/observables.hpp"

#include <algorithm>
#include <cmath>

namespace zener {

namespace {

using Eigen::Index;

auto block(const Eigen::VectorXd& x, std::size_t off, int n)
{
    return x.segment(static_cast<Index>(off), n);
}

double frob2(const Mat3& m) { return m.squaredNorm(); }

} // namespace

ErrorRecord error_norms_at_half_step(const DGSpace& space, const BlockVector& X_n, const BlockVector& X_np1,
                                     const ExactSolution& exact, double t_half, double dt)
{
    const Mesh& mesh = space.mesh();
    const int bs = space.block_size();
    const BlockVector Xh = 0.5 * (X_n + X_np1);
    const bool with_rate = dt > 0.0 && exact.gamma_dot && exact.zeta_dot;
    BlockVector Xd;
    if (with_rate)
        Xd = (X_np1 - X_n) / dt;
    const QuadratureRule rule = simplex_rule(space.dim(), space.quad_degree() + 2);

    double e0 = 0.0, ediv = 0.0, ejump = 0.0, edot = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const BasisValues bv = space.cell_values(c, rule);
        const auto g = block(Xh, space.gamma_offset(c), bs);
        const auto z = block(Xh, space.zeta_offset(c), bs);
        const Eigen::VectorXd s = g + z;
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const Vec& x = bv.points[q];
            const double w = bv.weights[q];
            e0 += w * (frob2(exact.gamma(x, t_half) - space.tensor_at(bv, q, g))
                       + frob2(exact.zeta(x, t_half) - space.tensor_at(bv, q, z)));
            ediv += w * (exact.div_sigma(x, t_half) - space.div_at(bv, q, s)).squaredNorm();
            if (with_rate) {
                edot += w * (frob2(exact.gamma_dot(x, t_half)
                                   - space.tensor_at(bv, q, block(Xd, space.gamma_offset(c), bs)))
                             + frob2(exact.zeta_dot(x, t_half)
                                     - space.tensor_at(bv, q, block(Xd, space.zeta_offset(c), bs))));
            }
        }
    }

    for (int f : mesh.face_term_facets()) {
        const Facet& facet = mesh.facet(static_cast<std::size_t>(f));
        auto [pts, w] = space.facet_quadrature(static_cast<std::size_t>(f));
        const int nsides = facet.is_boundary() ? 1 : 2;
        std::array<BasisValues, 2> bvs;
        std::array<Eigen::VectorXd, 2> sums;
        for (int s = 0; s < nsides; ++s) {
            const auto owner = static_cast<std::size_t>(facet.owners[s]);
            bvs[s] = space.eval_basis(owner, pts);
            sums[s] = block(Xh, space.gamma_offset(owner), bs) + block(Xh, space.zeta_offset(owner), bs);
        }
        double acc = 0.0;
        for (int q = 0; q < static_cast<int>(pts.size()); ++q) {
            Vec jump = Vec::Zero();
            if (nsides == 2) {
                // exact normal traces cancel across interior facets
                jump = (space.tensor_at(bvs[0], q, sums[0]) - space.tensor_at(bvs[1], q, sums[1])) * facet.normal;
            } else {
                jump = (exact.sigma(pts[q], t_half) - space.tensor_at(bvs[0], q, sums[0])) * facet.normal;
            }
            acc += w[q] * jump.squaredNorm();
        }
        ejump += acc / facet.diameter;
    }

    ErrorRecord r;
    r.t = t_half;
    r.e0 = std::sqrt(e0);
    r.ediv = std::sqrt(ediv);
    r.ejump = std::sqrt(ejump);
    r.E = r.e0 + r.ediv + r.ejump;
    r.norm_sym = std::sqrt(e0 + ediv + ejump);
    r.e_dot = std::sqrt(edot);
    return r;
}

ErrorRecord max_over_steps(const std::vector<ErrorRecord>& records)
{
    ErrorRecord m;
    for (const auto& r : records) {
        m.e0 = std::max(m.e0, r.e0);
        m.ediv = std::max(m.ediv, r.ediv);
        m.ejump = std::max(m.ejump, r.ejump);
        m.E = std::max(m.E, r.E);
        m.norm_sym = std::max(m.norm_sym, r.norm_sym);
        m.e_dot = std::max(m.e_dot, r.e_dot);
        m.e0_u = std::max(m.e0_u, r.e0_u);
    }
    if (!records.empty()) {
        m.n = records.back().n;
        m.t = records.back().t;
    }
    return m;
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors, const std::vector<double>& params)
{
    if (errors.size() != params.size())
        throw std::invalid_argument("eoc: errors and parameters differ in length");
    if (errors.size() < 2)
        throw std::invalid_argument("eoc: at least two rows are required");
    const bool decreasing = params[1] < params[0];
    for (std::size_t i = 1; i < params.size(); ++i) {
        const bool ok = decreasing ? params[i] < params[i - 1] : params[i] > params[i - 1];
        if (!ok || !(params[i] > 0.0) || !(params[i - 1] > 0.0))
            throw std::invalid_argument("eoc: parameters must be positive and strictly monotone");
    }
    std::vector<std::optional<double>> rates(errors.size());
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i] > 0.0 && errors[i - 1] > 0.0)
            rates[i] = std::log(errors[i] / errors[i - 1]) / std::log(params[i] / params[i - 1]);
    }
    return rates;
}

// ---------------------------------------------------------------------------

DisplacementTrack::DisplacementTrack(const DGSpace& space, const MaterialMap& materials, VectorField F, double dt)
    : space_(&space), materials_(&materials), F_(std::move(F)), dt_(dt)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("displacement track: dt must be positive");
    const auto n = static_cast<Index>(space.mesh().num_cells() * space.dim() * space.npoly());
    prev_ = Eigen::VectorXd::Zero(n);
    curr_ = Eigen::VectorXd::Zero(n);
}

Eigen::VectorXd DisplacementTrack::project(const VectorField& f, double t) const
{
    const int d = space_->dim(), np = space_->npoly();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(curr_.size());
    if (!f)
        return out;
    for (std::size_t c = 0; c < space_->mesh().num_cells(); ++c) {
        const BasisValues bv = space_->cell_values(c);
        const auto off = static_cast<Index>(c * d * np);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const Vec v = f(bv.points[q], t);
            for (int p = 0; p < d; ++p)
                out.segment(off + p * np, np) += (bv.weights[q] * v[p]) * bv.phi.row(q).transpose();
        }
    }
    return out;
}

void DisplacementTrack::start_exact(const VectorField& u)
{
    prev_ = project(u, -0.5 * dt_);
    curr_ = project(u, 0.5 * dt_);
    n_ = 0;
}

void DisplacementTrack::start_taylor(const VectorField& u0, const VectorField& u1)
{
    const Eigen::VectorXd a = project(u0, 0.0), b = project(u1, 0.0);
    prev_ = a - 0.5 * dt_ * b;
    curr_ = a + 0.5 * dt_ * b;
    n_ = 0;
}

void DisplacementTrack::advance(int n, const Eigen::VectorXd& stress_sum)
{
    if (n != n_ + 1)
        throw std::logic_error("displacement track advanced out of order");
    const int d = space_->dim(), np = space_->npoly(), bs = space_->block_size();
    const double t_f = (n - 0.5) * dt_;

    // projection of F/rho + (1/rho) div sigma_h onto degree-k vector polynomials
    Eigen::VectorXd bracket = Eigen::VectorXd::Zero(curr_.size());
    for (std::size_t c = 0; c < space_->mesh().num_cells(); ++c) {
        const BasisValues bv = space_->cell_values(c);
        const double inv_rho = 1.0 / materials_->rho(space_->mesh().region(c));
        const auto s = stress_sum.segment(static_cast<Index>(space_->sum_offset(c)), bs);
        const auto off = static_cast<Index>(c * d * np);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            Vec v = space_->div_at(bv, q, s);
            if (F_)
                v += F_(bv.points[q], t_f);
            v *= inv_rho;
            for (int p = 0; p < d; ++p)
                bracket.segment(off + p * np, np) += (bv.weights[q] * v[p]) * bv.phi.row(q).transpose();
        }
    }
    Eigen::VectorXd next = 2.0 * curr_ - prev_ + (dt_ * dt_) * bracket;
    prev_ = std::move(curr_);
    curr_ = std::move(next);
    n_ = n;
}

Vec DisplacementTrack::value(std::size_t c, const Vec& x) const
{
    const int d = space_->dim(), np = space_->npoly();
    const BasisValues bv = space_->eval_basis(c, {x});
    Vec v = Vec::Zero();
    for (int p = 0; p < d; ++p)
        v[p] = bv.phi.row(0).dot(curr_.segment(static_cast<Index>(c * d * np + p * np), np));
    return v;
}

double DisplacementTrack::l2_error(const VectorField& u, double t) const
{
    const int d = space_->dim(), np = space_->npoly();
    const QuadratureRule rule = simplex_rule(d, space_->quad_degree() + 2);
    double err = 0.0;
    for (std::size_t c = 0; c < space_->mesh().num_cells(); ++c) {
        const BasisValues bv = space_->cell_values(c, rule);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            Vec uh = Vec::Zero();
            for (int p = 0; p < d; ++p)
                uh[p] = bv.phi.row(q).dot(curr_.segment(static_cast<Index>(c * d * np + p * np), np));
            err += bv.weights[q] * (u(bv.points[q], t) - uh).squaredNorm();
        }
    }
    return std::sqrt(err);
}

Vec DisplacementTrack::cell_average(std::size_t c) const
{
    const int d = space_->dim(), np = space_->npoly();
    const BasisValues bv = space_->cell_values(c);
    Vec avg = Vec::Zero();
    for (int q = 0; q < static_cast<int>(bv.points.size()); ++q)
        for (int p = 0; p < d; ++p)
            avg[p] += bv.weights[q]
                      * bv.phi.row(q).dot(curr_.segment(static_cast<Index>(c * d * np + p * np), np));
    return avg / space_->mesh().geometry(c).volume;
}

// ---------------------------------------------------------------------------

double elastic_energy(const DGSpace& space, const MaterialMap& materials, const BlockVector& X)
{
    const int bs = space.block_size(), d = space.dim();
    double e = 0.0;
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
        const BasisValues bv = space.cell_values(c);
        const IsotropicLaw& law = materials.law_C(space.mesh().region(c));
        const auto g = block(X, space.gamma_offset(c), bs);
        const auto z = block(X, space.zeta_offset(c), bs);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const Mat3 gq = space.tensor_at(bv, q, g);
            e += bv.weights[q] * contract(apply_compliance(law, gq, d), gq + space.tensor_at(bv, q, z));
        }
    }
    return 0.5 * e;
}

SparseMatrix elastic_energy_matrix(const DGSpace& space, const MaterialMap& materials)
{
    const int d = space.dim(), np = space.npoly(), ns = space.nsym();
    std::vector<Triplet> trip;
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
        const IsotropicLaw& law = materials.law_C(space.mesh().region(c));
        for (int a = 0; a < ns; ++a) {
            const Mat3 ae = apply_compliance(law, sym_unit(d, a), d);
            for (int b = 0; b < ns; ++b) {
                const double v = contract(ae, sym_unit(d, b));
                if (v == 0.0)
                    continue;
                for (int i = 0; i < np; ++i) {
                    const auto row = static_cast<int>(space.gamma_offset(c)) + a * np + i;
                    trip.emplace_back(row, static_cast<int>(space.gamma_offset(c)) + b * np + i, v);
                    trip.emplace_back(row, static_cast<int>(space.zeta_offset(c)) + b * np + i, v);
                }
            }
        }
    }
    const auto n = static_cast<Index>(space.num_dofs());
    SparseMatrix m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

EnergyValues discrete_energy(const DGSpace& space, const MaterialMap& materials, double a, const BlockVector& X_k,
                             const BlockVector& X_kp1, double dt)
{
    const Mesh& mesh = space.mesh();
    const int bs = space.block_size(), d = space.dim();
    const BlockVector v = (X_kp1 - X_k) / dt;
    const Eigen::VectorXd y = sum_blocks(space, BlockVector(0.5 * (X_k + X_kp1)));

    EnergyValues ev;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const BasisValues bv = space.cell_values(c);
        const int r = mesh.region(c);
        const auto vg = block(v, space.gamma_offset(c), bs);
        const auto vz = block(v, space.zeta_offset(c), bs);
        const auto ys = block(y, space.sum_offset(c), bs);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const Mat3 g = space.tensor_at(bv, q, vg), z = space.tensor_at(bv, q, vz);
            ev.kinetic += 0.5 * bv.weights[q]
                          * (contract(apply_compliance(materials.law_C(r), g, d), g)
                             + contract(apply_compliance(materials.law_V(r), z, d), z));
            ev.div_part += 0.5 * bv.weights[q] * space.div_at(bv, q, ys).squaredNorm() / materials.rho(r);
        }
    }
    for (int f : mesh.face_term_facets()) {
        const Facet& facet = mesh.facet(static_cast<std::size_t>(f));
        auto [pts, w] = space.facet_quadrature(static_cast<std::size_t>(f));
        const int nsides = facet.is_boundary() ? 1 : 2;
        const double avg = nsides == 2 ? 0.5 : 1.0;
        std::array<BasisValues, 2> bvs;
        for (int s = 0; s < nsides; ++s)
            bvs[s] = space.eval_basis(static_cast<std::size_t>(facet.owners[s]), pts);
        for (int q = 0; q < static_cast<int>(pts.size()); ++q) {
            Vec jump = Vec::Zero(), mean = Vec::Zero();
            for (int s = 0; s < nsides; ++s) {
                const auto owner = static_cast<std::size_t>(facet.owners[s]);
                const auto ys = block(y, space.sum_offset(owner), bs);
                jump += (s == 0 ? 1.0 : -1.0) * (space.tensor_at(bvs[s], q, ys) * facet.normal);
                mean += avg * space.div_at(bvs[s], q, ys) / materials.rho(mesh.region(owner));
            }
            ev.jump_part += 0.5 * a * w[q] * jump.squaredNorm() / facet.diameter;
            ev.coupling += w[q] * mean.dot(jump);
        }
    }
    ev.E = ev.kinetic + ev.div_part + ev.jump_part;
    ev.shifted = ev.E - ev.coupling;
    return ev;
}

double shifted_energy(const DGSpace& space, const AssembledSystem& sys, const BlockVector& X_k,
                      const BlockVector& X_kp1, double dt)
{
    const BlockVector v = (X_kp1 - X_k) / dt;
    const Eigen::VectorXd y = sum_blocks(space, BlockVector(0.5 * (X_k + X_kp1)));
    return 0.5 * v.dot(sys.M_A * v) + 0.5 * y.dot(sys.s_sum * y);
}

double state_energy_norm(const SparseMatrix& M_A, const BlockVector& X)
{
    return std::sqrt(std::max(0.0, X.dot(M_A * X)));
}

StressNorms stress_norms(const DGSpace& space, const BlockVector& X)
{
    // orthonormal modes: L2 norms follow from weighted coefficient sums
    const int bs = space.block_size(), np = space.npoly(), d = space.dim();
    StressNorms n;
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
        const auto g = block(X, space.gamma_offset(c), bs);
        const auto z = block(X, space.zeta_offset(c), bs);
        for (int a = 0; a < space.nsym(); ++a) {
            const double w = sym_weight(d, a);
            n.gamma += w * g.segment(a * np, np).squaredNorm();
            n.zeta += w * z.segment(a * np, np).squaredNorm();
            n.sum += w * (g.segment(a * np, np) + z.segment(a * np, np)).squaredNorm();
        }
    }
    n.gamma = std::sqrt(n.gamma);
    n.zeta = std::sqrt(n.zeta);
    n.sum = std::sqrt(n.sum);
    return n;
}

int locate_probe(const Mesh& mesh, const Vec& x)
{
    const int c = mesh.locate(x, 1e-9);
    if (c < 0)
        throw ConfigError("probe point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) + ", "
                          + std::to_string(x.z()) + ") lies outside the mesh");
    return c;
}

StressProbe probe_stress(const DGSpace& space, const BlockVector& X, const Vec& x, int cell)
{
    StressProbe p;
    p.cell = cell >= 0 ? cell : locate_probe(space.mesh(), x);
    const auto c = static_cast<std::size_t>(p.cell);
    const BasisValues bv = space.eval_basis(c, {x});
    const int bs = space.block_size();
    p.gamma = space.tensor_at(bv, 0, block(X, space.gamma_offset(c), bs));
    p.zeta = space.tensor_at(bv, 0, block(X, space.zeta_offset(c), bs));
    p.sigma = p.gamma + p.zeta;
    return p;
}

CellMagnitudes cell_stress_magnitudes(const DGSpace& space, const BlockVector& X)
{
    const std::size_t nc = space.mesh().num_cells();
    const int bs = space.block_size();
    CellMagnitudes m;
    m.gamma.assign(nc, 0.0);
    m.zeta.assign(nc, 0.0);
    m.sum.assign(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
        const BasisValues bv = space.cell_values(c);
        const auto g = block(X, space.gamma_offset(c), bs);
        const auto z = block(X, space.zeta_offset(c), bs);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const Mat3 gq = space.tensor_at(bv, q, g), zq = space.tensor_at(bv, q, z);
            m.gamma[c] += bv.weights[q] * gq.norm();
            m.zeta[c] += bv.weights[q] * zq.norm();
            m.sum[c] += bv.weights[q] * (gq + zq).norm();
        }
        const double vol = space.mesh().geometry(c).volume;
        m.gamma[c] /= vol;
        m.zeta[c] /= vol;
        m.sum[c] /= vol;
    }
    return m;
}

} // namespace zener
