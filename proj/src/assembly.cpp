#include "zener/assembly.hpp"

#include "parallel.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace zener {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Per-cell nsym x nsym matrix (L E_a) : E_b for a compliance law L.
MatrixXd compliance_components(const IsotropicLaw& law, int dim)
{
    const int ns = nsym(dim);
    MatrixXd m(ns, ns);
    for (int a = 0; a < ns; ++a) {
        const Mat3 ae = apply_compliance(law, sym_unit(dim, a), dim);
        for (int b = 0; b < ns; ++b)
            m(a, b) = contract(ae, sym_unit(dim, b));
    }
    return m;
}

void add_block(std::vector<Triplet>& out, const MatrixXd& block, std::size_t row0, std::size_t col0,
               double drop = 0.0)
{
    for (Index i = 0; i < block.rows(); ++i)
        for (Index j = 0; j < block.cols(); ++j)
            if (std::abs(block(i, j)) > drop)
                out.emplace_back(static_cast<int>(row0 + i), static_cast<int>(col0 + j), block(i, j));
}

// kron(comp, I_npoly) added at (offset, offset)
void add_kron_identity(std::vector<Triplet>& out, const MatrixXd& comp, int npoly, std::size_t offset, double scale)
{
    for (Index a = 0; a < comp.rows(); ++a)
        for (Index b = 0; b < comp.cols(); ++b) {
            const double v = scale * comp(a, b);
            if (v == 0.0)
                continue;
            for (int i = 0; i < npoly; ++i)
                out.emplace_back(static_cast<int>(offset + a * npoly + i), static_cast<int>(offset + b * npoly + i), v);
        }
}

SparseMatrix from_triplets(std::size_t n, const std::vector<std::vector<Triplet>>& parts)
{
    std::size_t total = 0;
    for (const auto& p : parts)
        total += p.size();
    std::vector<Triplet> all;
    all.reserve(total);
    for (const auto& p : parts)
        all.insert(all.end(), p.begin(), p.end());
    SparseMatrix m(static_cast<Index>(n), static_cast<Index>(n));
    m.setFromTriplets(all.begin(), all.end());
    m.makeCompressed();
    return m;
}

// Divergence matrix: row q*d + p, column a*npoly + i holds (div phi_i E_a)_p at q.
MatrixXd divergence_matrix(const DGSpace& space, const BasisValues& bv)
{
    const int d = space.dim(), np = space.npoly();
    const auto nq = static_cast<Index>(bv.phi.rows());
    MatrixXd D = MatrixXd::Zero(nq * d, space.block_size());
    for (int a = 0; a < space.nsym(); ++a) {
        const auto pq = sym_pair(d, a);
        for (Index q = 0; q < nq; ++q) {
            if (pq[0] == pq[1]) {
                D.block(q * d + pq[0], a * np, 1, np) = bv.dphi[pq[0]].row(q);
            } else {
                D.block(q * d + pq[0], a * np, 1, np) = bv.dphi[pq[1]].row(q);
                D.block(q * d + pq[1], a * np, 1, np) = bv.dphi[pq[0]].row(q);
            }
        }
    }
    return D;
}

// Normal trace matrix: row q*d + p, column a*npoly + i holds (phi_i E_a n)_p at q.
MatrixXd trace_matrix(const DGSpace& space, const BasisValues& bv, const Vec& n)
{
    const int d = space.dim(), np = space.npoly();
    const auto nq = static_cast<Index>(bv.phi.rows());
    MatrixXd T = MatrixXd::Zero(nq * d, space.block_size());
    for (int a = 0; a < space.nsym(); ++a) {
        const auto pq = sym_pair(d, a);
        for (Index q = 0; q < nq; ++q) {
            if (pq[0] == pq[1]) {
                T.block(q * d + pq[0], a * np, 1, np) = n[pq[0]] * bv.phi.row(q);
            } else {
                T.block(q * d + pq[0], a * np, 1, np) = n[pq[1]] * bv.phi.row(q);
                T.block(q * d + pq[1], a * np, 1, np) = n[pq[0]] * bv.phi.row(q);
            }
        }
    }
    return T;
}

// Point weights repeated once per vector component.
Eigen::VectorXd expand_weights(const Eigen::VectorXd& w, int d)
{
    Eigen::VectorXd out(w.size() * d);
    for (Index q = 0; q < w.size(); ++q)
        out.segment(q * d, d).setConstant(w[q]);
    return out;
}

void check_classified(const Mesh& mesh)
{
    for (std::size_t f = 0; f < mesh.num_facets(); ++f)
        if (mesh.facet(f).kind == FacetKind::unclassified)
            throw ConfigError("facet " + std::to_string(f) + " is not classified; run classify_facets first");
}

Vec second_derivative(const LoadData& data, const Vec& x, double t)
{
    if (data.g_D_ddot)
        return data.g_D_ddot(x, t);
    if (!(data.fd_step > 0.0))
        throw ConfigError("Dirichlet data needs either its second time derivative or a differencing step");
    const double h = data.fd_step;
    return (data.g_D(x, t + h) - 2.0 * data.g_D(x, t) + data.g_D(x, t - h)) / (h * h);
}

} // namespace

SparseMatrix assemble_mass_A(const DGSpace& space, const MaterialMap& materials)
{
    const Mesh& mesh = space.mesh();
    materials.check_covers(mesh.regions());
    std::vector<std::vector<Triplet>> parts(1);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const int r = mesh.region(c);
        add_kron_identity(parts[0], compliance_components(materials.law_C(r), space.dim()), space.npoly(),
                          space.gamma_offset(c), 1.0);
        add_kron_identity(parts[0], compliance_components(materials.law_V(r), space.dim()), space.npoly(),
                          space.zeta_offset(c), 1.0);
    }
    return from_triplets(space.num_dofs(), parts);
}

SparseMatrix assemble_damping(const DGSpace& space, const MaterialMap& materials)
{
    const Mesh& mesh = space.mesh();
    materials.check_covers(mesh.regions());
    std::vector<std::vector<Triplet>> parts(1);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const int r = mesh.region(c);
        add_kron_identity(parts[0], compliance_components(materials.law_V(r), space.dim()), space.npoly(),
                          space.zeta_offset(c), 1.0 / materials.omega(r));
    }
    return from_triplets(space.num_dofs(), parts);
}

StiffnessParts assemble_stiffness_parts(const DGSpace& space, const MaterialMap& materials, double a,
                                        const AssemblyOptions& opts)
{
    const Mesh& mesh = space.mesh();
    materials.check_covers(mesh.regions());
    check_classified(mesh);
    if (!(a >= 0.0))
        throw std::invalid_argument("penalty parameter must be nonnegative");
    const int d = space.dim();
    const int workers = std::max(1, opts.workers);

    std::vector<std::vector<Triplet>> vol(workers), cons(workers), pen(workers);

    detail::parallel_chunks(mesh.num_cells(), workers, [&](std::size_t b, std::size_t e, int w) {
        for (std::size_t c = b; c < e; ++c) {
            const BasisValues bv = space.cell_values(c);
            const MatrixXd D = divergence_matrix(space, bv);
            const Eigen::VectorXd wd = expand_weights(bv.weights, d) / materials.rho(mesh.region(c));
            const MatrixXd block = D.transpose() * wd.asDiagonal() * D;
            add_block(vol[w], block, space.sum_offset(c), space.sum_offset(c));
        }
    });

    const std::vector<int> faces = mesh.face_term_facets();
    detail::parallel_chunks(faces.size(), workers, [&](std::size_t b, std::size_t e, int w) {
        for (std::size_t fi = b; fi < e; ++fi) {
            const auto f = static_cast<std::size_t>(faces[fi]);
            const Facet& facet = mesh.facet(f);
            const int nsides = facet.is_boundary() ? 1 : 2;
            const double avg = facet.is_boundary() ? 1.0 : 0.5;

            std::array<MatrixXd, 2> jump, mean;
            Eigen::VectorXd wd;
            for (int s = 0; s < nsides; ++s) {
                const BasisValues bv = space.facet_values(f, s);
                if (s == 0)
                    wd = expand_weights(bv.weights, d);
                const int owner = facet.owners[s];
                jump[s] = (s == 0 ? 1.0 : -1.0) * trace_matrix(space, bv, facet.normal);
                mean[s] = (avg / materials.rho(mesh.region(owner))) * divergence_matrix(space, bv);
            }
            const double pen_scale = a / facet.diameter;
            for (int r = 0; r < nsides; ++r) {
                for (int c = 0; c < nsides; ++c) {
                    // row: test on side r, column: trial on side c
                    const MatrixXd cblock = -(jump[r].transpose() * wd.asDiagonal() * mean[c])
                                            - (mean[r].transpose() * wd.asDiagonal() * jump[c]);
                    const MatrixXd pblock = pen_scale * (jump[r].transpose() * wd.asDiagonal() * jump[c]);
                    const auto ro = space.sum_offset(static_cast<std::size_t>(facet.owners[r]));
                    const auto co = space.sum_offset(static_cast<std::size_t>(facet.owners[c]));
                    add_block(cons[w], cblock, ro, co);
                    add_block(pen[w], pblock, ro, co);
                }
            }
        }
    });

    StiffnessParts parts;
    parts.volume = from_triplets(space.num_sum_dofs(), vol);
    parts.consistency = from_triplets(space.num_sum_dofs(), cons);
    parts.penalty = from_triplets(space.num_sum_dofs(), pen);
    return parts;
}

SparseMatrix replicate_blocks(const DGSpace& space, const SparseMatrix& s)
{
    const auto bs = static_cast<std::size_t>(space.block_size());
    std::vector<std::vector<Triplet>> parts(1);
    parts[0].reserve(4 * static_cast<std::size_t>(s.nonZeros()));
    for (Index row = 0; row < s.outerSize(); ++row) {
        const std::size_t rc = static_cast<std::size_t>(row) / bs, rl = static_cast<std::size_t>(row) % bs;
        for (SparseMatrix::InnerIterator it(s, row); it; ++it) {
            const std::size_t cc = static_cast<std::size_t>(it.col()) / bs, cl = static_cast<std::size_t>(it.col()) % bs;
            for (std::size_t rb = 0; rb < 2; ++rb)
                for (std::size_t cb = 0; cb < 2; ++cb)
                    parts[0].emplace_back(static_cast<int>(space.gamma_offset(rc) + rb * bs + rl),
                                          static_cast<int>(space.gamma_offset(cc) + cb * bs + cl), it.value());
        }
    }
    return from_triplets(space.num_dofs(), parts);
}

SparseMatrix assemble_stiffness(const DGSpace& space, const MaterialMap& materials, double a,
                                const AssemblyOptions& opts)
{
    return replicate_blocks(space, assemble_stiffness_parts(space, materials, a, opts).total());
}

Eigen::VectorXd assemble_load_sum(const DGSpace& space, const MaterialMap& materials, const LoadData& data,
                                  double a, double t, const AssemblyOptions& opts)
{
    const Mesh& mesh = space.mesh();
    materials.check_covers(mesh.regions());
    check_classified(mesh);
    const int d = space.dim();
    const int bs = space.block_size();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Index>(space.num_sum_dofs()));

    auto pack = [d](const std::vector<Vec>& vals) {
        Eigen::VectorXd v(static_cast<Index>(vals.size()) * d);
        for (std::size_t q = 0; q < vals.size(); ++q)
            v.segment(static_cast<Index>(q) * d, d) = vals[q].head(d);
        return v;
    };

    if (data.F) {
        const QuadratureRule rule = opts.load_quad_degree >= 0 ? simplex_rule(d, opts.load_quad_degree)
                                                               : space.cell_rule();
        for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
            const BasisValues bv = space.cell_values(c, rule);
            const double inv_rho = 1.0 / materials.rho(mesh.region(c));
            std::vector<Vec> fv;
            for (const Vec& x : bv.points)
                fv.push_back(data.F(x, t) * inv_rho);
            const Eigen::VectorXd wd = expand_weights(bv.weights, d);
            b.segment(static_cast<Index>(space.sum_offset(c)), bs)
                -= divergence_matrix(space, bv).transpose() * wd.cwiseProduct(pack(fv));
        }
    }

    for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
        const Facet& facet = mesh.facet(f);
        if (facet.kind == FacetKind::interior && !data.F)
            continue;
        if (facet.kind == FacetKind::dirichlet && !data.g_D)
            continue;
        if (facet.kind == FacetKind::neumann && !data.F && !data.g_N)
            continue;

        auto [pts, w] = space.facet_quadrature(f);
        const Eigen::VectorXd wd = expand_weights(w, d);
        const int nsides = facet.is_boundary() ? 1 : 2;

        std::array<BasisValues, 2> bvs;
        for (int s = 0; s < nsides; ++s)
            bvs[s] = space.eval_basis(static_cast<std::size_t>(facet.owners[s]), pts);

        Eigen::VectorXd rhs_jump = Eigen::VectorXd::Zero(wd.size()); // paired with the jump of tau
        Eigen::VectorXd rhs_div = Eigen::VectorXd::Zero(wd.size());  // paired with (1/rho) div tau, side 0

        if (facet.kind == FacetKind::interior || facet.kind == FacetKind::neumann) {
            if (data.F) {
                std::vector<Vec> mf;
                for (const Vec& x : pts) {
                    Vec m = Vec::Zero();
                    for (int s = 0; s < nsides; ++s)
                        m += data.F(x, t) / materials.rho(mesh.region(facet.owners[s]));
                    mf.push_back(m / nsides);
                }
                rhs_jump += pack(mf);
            }
        }
        if (facet.kind == FacetKind::neumann && data.g_N) {
            std::vector<Vec> gn;
            for (const Vec& x : pts)
                gn.push_back(data.g_N(x, facet.normal, t));
            const Eigen::VectorXd g = pack(gn);
            rhs_jump += (a / facet.diameter) * g;
            if (!opts.strict_paper_bc)
                rhs_div -= g;
        }
        if (facet.kind == FacetKind::dirichlet) {
            std::vector<Vec> gd;
            for (const Vec& x : pts)
                gd.push_back(second_derivative(data, x, t));
            rhs_jump += pack(gd);
        }

        for (int s = 0; s < nsides; ++s) {
            const auto off = static_cast<Index>(space.sum_offset(static_cast<std::size_t>(facet.owners[s])));
            const MatrixXd J = (s == 0 ? 1.0 : -1.0) * trace_matrix(space, bvs[s], facet.normal);
            Eigen::VectorXd contrib = J.transpose() * wd.cwiseProduct(rhs_jump);
            if (s == 0 && rhs_div.squaredNorm() > 0.0) {
                const double inv_rho = 1.0 / materials.rho(mesh.region(facet.owners[0]));
                contrib += inv_rho * (divergence_matrix(space, bvs[0]).transpose() * wd.cwiseProduct(rhs_div));
            }
            b.segment(off, bs) += contrib;
        }
    }
    return b;
}

BlockVector assemble_load(const DGSpace& space, const MaterialMap& materials, const LoadData& data, double a,
                          double t, const AssemblyOptions& opts)
{
    const Eigen::VectorXd s = assemble_load_sum(space, materials, data, a, t, opts);
    BlockVector x(static_cast<Index>(space.num_dofs()));
    const int bs = space.block_size();
    for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
        const auto seg = s.segment(static_cast<Index>(space.sum_offset(c)), bs);
        x.segment(static_cast<Index>(space.gamma_offset(c)), bs) = seg;
        x.segment(static_cast<Index>(space.zeta_offset(c)), bs) = seg;
    }
    return x;
}

AssembledSystem assemble_system(const DGSpace& space, const MaterialMap& materials, double a,
                                const AssemblyOptions& opts)
{
    AssembledSystem sys;
    sys.a = a;
    sys.M_A = assemble_mass_A(space, materials);
    sys.M_damp = assemble_damping(space, materials);
    sys.s_sum = assemble_stiffness_parts(space, materials, a, opts).total();
    sys.S = replicate_blocks(space, sys.s_sum);
    return sys;
}

} // namespace zener
