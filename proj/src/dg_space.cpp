#include "zener/dg_space.hpp"

#include <cmath>
#include <stdexcept>

namespace zener {

DGSpace::DGSpace(const Mesh& mesh, int k, int quad_degree)
    : mesh_(&mesh), k_(k), nsym_(zener::nsym(mesh.dim())), npoly_(ScalarBasis::dimension(mesh.dim(), k)),
      quad_degree_(quad_degree < 0 ? 2 * k + 2 : quad_degree)
{
    if (k < 1)
        throw std::invalid_argument("DGSpace: polynomial degree k must be at least 1");
    if (quad_degree_ < 2 * k)
        throw std::invalid_argument("DGSpace: quadrature degree must be at least 2k");
    basis_ = ScalarBasis(mesh.dim(), k);
    cell_rule_ = simplex_rule(mesh.dim(), quad_degree_);
    facet_rule_ = simplex_rule(mesh.dim() - 1, quad_degree_);

    const auto nq = static_cast<Eigen::Index>(cell_rule_.size());
    ref_phi_.resize(nq, npoly_);
    for (auto& m : ref_dphi_)
        m.setZero(nq, npoly_);
    for (Eigen::Index q = 0; q < nq; ++q) {
        ref_phi_.row(q) = basis_.values(cell_rule_.points[q]).transpose();
        const auto g = basis_.gradients(cell_rule_.points[q]);
        for (int p = 0; p < 3; ++p)
            ref_dphi_[p].row(q) = g.col(p).transpose();
    }
}

BasisValues DGSpace::cell_values(std::size_t c) const
{
    const CellGeometry& g = mesh_->geometry(c);
    const double scale = 1.0 / std::sqrt(g.det);
    const auto nq = static_cast<Eigen::Index>(cell_rule_.size());

    BasisValues bv;
    bv.points.reserve(cell_rule_.size());
    bv.weights.resize(nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
        bv.points.push_back(g.to_physical(cell_rule_.points[q]));
        bv.weights[q] = cell_rule_.weights[q] * g.det;
    }
    bv.phi = scale * ref_phi_;
    // grad_x = J^{-T} grad_xi, i.e. row gradients times J^{-1}
    for (int p = 0; p < 3; ++p) {
        bv.dphi[p] = Eigen::MatrixXd::Zero(nq, npoly_);
        for (int r = 0; r < 3; ++r)
            if (g.inverse(r, p) != 0.0)
                bv.dphi[p] += (scale * g.inverse(r, p)) * ref_dphi_[r];
    }
    return bv;
}

BasisValues DGSpace::cell_values(std::size_t c, const QuadratureRule& rule) const
{
    const CellGeometry& g = mesh_->geometry(c);
    std::vector<Vec> pts;
    pts.reserve(rule.size());
    for (const Vec& xi : rule.points)
        pts.push_back(g.to_physical(xi));
    BasisValues bv = eval_basis(c, pts);
    bv.weights.resize(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q)
        bv.weights[static_cast<Eigen::Index>(q)] = rule.weights[q] * g.det;
    return bv;
}

BasisValues DGSpace::map_reference(std::size_t c, const std::vector<Vec>& ref_points) const
{
    const CellGeometry& g = mesh_->geometry(c);
    const double scale = 1.0 / std::sqrt(g.det);
    const auto n = static_cast<Eigen::Index>(ref_points.size());
    BasisValues bv;
    bv.phi.resize(n, npoly_);
    for (auto& m : bv.dphi)
        m.resize(n, npoly_);
    for (Eigen::Index q = 0; q < n; ++q) {
        bv.phi.row(q) = scale * basis_.values(ref_points[q]).transpose();
        const Eigen::Matrix<double, Eigen::Dynamic, 3> gx = scale * basis_.gradients(ref_points[q]) * g.inverse;
        for (int p = 0; p < 3; ++p)
            bv.dphi[p].row(q) = gx.col(p).transpose();
    }
    return bv;
}

BasisValues DGSpace::eval_basis(std::size_t c, const std::vector<Vec>& points) const
{
    const CellGeometry& g = mesh_->geometry(c);
    std::vector<Vec> ref;
    ref.reserve(points.size());
    for (const Vec& x : points)
        ref.push_back(g.to_reference(x));
    BasisValues bv = map_reference(c, ref);
    bv.points = points;
    return bv;
}

std::pair<std::vector<Vec>, Eigen::VectorXd> DGSpace::facet_quadrature(std::size_t f) const
{
    const Facet& facet = mesh_->facet(f);
    const int d = dim();
    const Vec& a = mesh_->vertex(facet.vertices[0]);
    const Vec& b = mesh_->vertex(facet.vertices[1]);
    const Vec e1 = b - a;
    const Vec e2 = d == 3 ? Vec(mesh_->vertex(facet.vertices[2]) - a) : Vec::Zero();
    const double scale = facet.measure / reference_volume(d - 1);

    std::vector<Vec> pts;
    Eigen::VectorXd w(static_cast<Eigen::Index>(facet_rule_.size()));
    pts.reserve(facet_rule_.size());
    for (std::size_t q = 0; q < facet_rule_.size(); ++q) {
        const Vec& xi = facet_rule_.points[q];
        pts.push_back(a + xi.x() * e1 + xi.y() * e2);
        w[static_cast<Eigen::Index>(q)] = facet_rule_.weights[q] * scale;
    }
    return {std::move(pts), std::move(w)};
}

BasisValues DGSpace::facet_values(std::size_t f, int side) const
{
    const int owner = mesh_->facet(f).owners[side];
    if (owner < 0)
        throw std::invalid_argument("facet_values: facet has no owner on the requested side");
    auto [pts, w] = facet_quadrature(f);
    BasisValues bv = eval_basis(static_cast<std::size_t>(owner), pts);
    bv.weights = std::move(w);
    return bv;
}

std::vector<Vec> tensor_div(const DGSpace& space, std::size_t c, const std::vector<Vec>& points, int dof)
{
    if (dof < 0 || dof >= space.block_size())
        throw std::invalid_argument("tensor_div: local dof out of range");
    const BasisValues bv = space.eval_basis(c, points);
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(space.block_size());
    coeffs[dof] = 1.0;
    std::vector<Vec> out;
    out.reserve(points.size());
    for (int q = 0; q < static_cast<int>(points.size()); ++q)
        out.push_back(space.div_at(bv, q, coeffs));
    return out;
}

namespace {

void check_finite(const Mat3& m, const Vec& x)
{
    if (!m.allFinite())
        throw NumericalError("non-finite field value at (" + std::to_string(x.x()) + ", "
                             + std::to_string(x.y()) + ", " + std::to_string(x.z()) + ")");
}

// Adds the projection of `t` sampled at quadrature point q into a tensor block.
template <typename Seg>
void accumulate(const DGSpace& space, const BasisValues& bv, int q, const Mat3& t, Seg block)
{
    const int np = space.npoly();
    const double w = bv.weights[q];
    for (int a = 0; a < space.nsym(); ++a) {
        const auto pq = sym_pair(space.dim(), a);
        block.segment(a * np, np) += (w * t(pq[0], pq[1])) * bv.phi.row(q).transpose();
    }
}

} // namespace

BlockVector l2_project(const DGSpace& space, const PairField& field, double t)
{
    BlockVector x = BlockVector::Zero(static_cast<Eigen::Index>(space.num_dofs()));
    const int bs = space.block_size();
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
        const BasisValues bv = space.cell_values(c);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const auto [g, z] = field(bv.points[q], t);
            check_finite(g, bv.points[q]);
            check_finite(z, bv.points[q]);
            accumulate(space, bv, q, g, x.segment(static_cast<Eigen::Index>(space.gamma_offset(c)), bs));
            accumulate(space, bv, q, z, x.segment(static_cast<Eigen::Index>(space.zeta_offset(c)), bs));
        }
    }
    return x;
}

Eigen::VectorXd l2_project_tensor(const DGSpace& space, const TensorField& field, double t)
{
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_sum_dofs()));
    const int bs = space.block_size();
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
        const BasisValues bv = space.cell_values(c);
        for (int q = 0; q < static_cast<int>(bv.points.size()); ++q) {
            const Mat3 v = field(bv.points[q], t);
            check_finite(v, bv.points[q]);
            accumulate(space, bv, q, v, x.segment(static_cast<Eigen::Index>(space.sum_offset(c)), bs));
        }
    }
    return x;
}

Eigen::VectorXd sum_blocks(const DGSpace& space, const BlockVector& x)
{
    Eigen::VectorXd s(static_cast<Eigen::Index>(space.num_sum_dofs()));
    const int bs = space.block_size();
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c)
        s.segment(static_cast<Eigen::Index>(space.sum_offset(c)), bs)
            = x.segment(static_cast<Eigen::Index>(space.gamma_offset(c)), bs)
              + x.segment(static_cast<Eigen::Index>(space.zeta_offset(c)), bs);
    return s;
}

BlockVector expand_gamma(const DGSpace& space, const Eigen::VectorXd& s)
{
    BlockVector x = BlockVector::Zero(static_cast<Eigen::Index>(space.num_dofs()));
    const int bs = space.block_size();
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c)
        x.segment(static_cast<Eigen::Index>(space.gamma_offset(c)), bs)
            = s.segment(static_cast<Eigen::Index>(space.sum_offset(c)), bs);
    return x;
}

} // namespace zener
