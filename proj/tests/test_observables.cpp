#include "zener/observables.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace zener;
using zener::testing::random_vector;

namespace {

// L2 norm squared of a coefficient vector in the orthonormal tensor basis
double tensor_l2_sq(const DGSpace& s, const Eigen::VectorXd& x)
{
    double r = 0.0;
    const int np = s.npoly();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const int a = static_cast<int>((i % s.block_size()) / np);
        r += sym_weight(s.dim(), a) * x[i] * x[i];
    }
    return r;
}

// extreme eigenvalues of a compliance law on symmetric tensors
std::pair<double, double> compliance_bounds(const IsotropicLaw& law, int dim)
{
    const int n = nsym(dim);
    Eigen::MatrixXd G(n, n), W = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        W(a, a) = sym_weight(dim, a);
        for (int b = 0; b < n; ++b)
            G(a, b) = contract(apply_compliance(law, sym_unit(dim, a), dim), sym_unit(dim, b));
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(G, W);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

ExactSolution zero_solution()
{
    DisplacementProfile p;
    p.value = [](const Vec&) { return Vec(Vec::Zero()); };
    p.gradient = [](const Vec&) { return Mat3(Mat3::Zero()); };
    p.hessian = [](const Vec&) { return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; };
    return zener_exponential_mms(p, 0.0, space_test_materials(), 2, 5.0);
}

} // namespace

TEST(Eoc, Examples)
{
    auto r = eoc({4.0, 1.0}, {2.0, 1.0});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_FALSE(r[0].has_value());
    EXPECT_NEAR(*r[1], 2.0, 1e-15);
    r = eoc({3.59, 1.84}, {0.707, 0.354});
    EXPECT_NEAR(*r[1], 0.9662, 5e-4);
    r = eoc({1.91e-1, 4.84e-2}, {1.0 / 32, 1.0 / 64});
    EXPECT_NEAR(*r[1], 1.9805, 5e-4);
}

TEST(Eoc, InvalidInput)
{
    EXPECT_THROW(eoc({1.0}, {1.0}), std::invalid_argument);
    EXPECT_THROW(eoc({1.0, 2.0}, {1.0}), std::invalid_argument);
    EXPECT_THROW(eoc({1.0, 2.0, 3.0}, {1.0, 0.5, 0.7}), std::invalid_argument);
    EXPECT_THROW(eoc({1.0, 2.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST(ErrorNorms, ExactRepresentationGivesZeroError)
{
    const ExactSolution ex = example1_time_solution();
    const Mesh m = unit_square_structured(2);
    const DGSpace s(m, 1);
    const double dt = 1e-6;
    const BlockVector X0 = l2_project(s, ex.pair(), 0.0), X1 = l2_project(s, ex.pair(), dt);
    const ErrorRecord e = error_norms_at_half_step(s, X0, X1, ex, 0.5 * dt, dt);
    EXPECT_LT(e.e0, 1e-10);
    EXPECT_LT(e.ediv, 1e-10);
    EXPECT_LT(e.ejump, 1e-10);
    EXPECT_NEAR(e.E, e.e0 + e.ediv + e.ejump, 1e-15);
    EXPECT_NEAR(e.t, 0.5 * dt, 1e-20);
}

TEST(ErrorNorms, ZeroAgainstZero)
{
    const Mesh m = unit_square_structured(2);
    const DGSpace s(m, 1);
    const BlockVector z = BlockVector::Zero(static_cast<Eigen::Index>(s.num_dofs()));
    const ErrorRecord e = error_norms_at_half_step(s, z, z, zero_solution(), 0.5, 0.1);
    EXPECT_EQ(e.E, 0.0);
    EXPECT_EQ(e.e_dot, 0.0);
    EXPECT_EQ(e.norm_sym, 0.0);
}

TEST(ErrorNorms, KnownOffsetIsMeasured)
{
    // a constant gamma offset T gives e0 = |T| sqrt(area), no divergence
    // and no jump
    const Mesh m = unit_square_structured(3);
    const DGSpace s(m, 1);
    Mat3 T = Mat3::Zero();
    T(0, 0) = 0.3;
    T(0, 1) = T(1, 0) = -0.4;
    const BlockVector X = l2_project(s, [&](const Vec&, double) { return std::make_pair(T, Mat3(Mat3::Zero())); }, 0.0);
    const ErrorRecord e = error_norms_at_half_step(s, X, X, zero_solution(), 0.5, 0.0);
    EXPECT_NEAR(e.e0, T.norm(), 1e-13);
    EXPECT_LT(e.ediv, 1e-12);
    EXPECT_LT(e.ejump, 1e-12);
    EXPECT_NEAR(e.norm_sym, std::sqrt(e.e0 * e.e0 + e.ediv * e.ediv + e.ejump * e.ejump), 1e-15);
}

TEST(ErrorNorms, MaxOverSteps)
{
    ErrorRecord a, b;
    a.e0 = 1.0;
    a.ediv = 5.0;
    b.e0 = 2.0;
    b.ejump = 3.0;
    const ErrorRecord m = max_over_steps({a, b});
    EXPECT_EQ(m.e0, 2.0);
    EXPECT_EQ(m.ediv, 5.0);
    EXPECT_EQ(m.ejump, 3.0);
}

TEST(Displacement, ZeroTrackStaysZero)
{
    const Mesh m = unit_square_structured(2);
    const DGSpace s(m, 1);
    const MaterialMap mat = uniform_materials(space_test_materials(), 2);
    DisplacementTrack tr(s, mat, [](const Vec&, double) { return Vec(Vec::Zero()); }, 0.1);
    tr.start_exact([](const Vec&, double) { return Vec(Vec::Zero()); });
    for (int n = 1; n <= 5; ++n)
        tr.advance(n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.num_sum_dofs())));
    EXPECT_EQ(tr.current().norm(), 0.0);
    EXPECT_EQ(tr.index(), 5);
}

TEST(Displacement, RigidHistoryIsFixedPoint)
{
    const Mesh m = unit_square_structured(2);
    const DGSpace s(m, 2);
    const MaterialMap mat = uniform_materials(space_test_materials(), 2);
    DisplacementTrack tr(s, mat, [](const Vec&, double) { return Vec(Vec::Zero()); }, 0.1);
    const Vec c(0.7, -1.2, 0.0);
    tr.start_exact([c](const Vec&, double) { return c; });
    for (int n = 1; n <= 6; ++n)
        tr.advance(n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.num_sum_dofs())));
    for (std::size_t cell = 0; cell < m.num_cells(); ++cell) {
        EXPECT_LT((tr.value(cell, m.geometry(cell).centroid) - c).norm(), 1e-12);
        EXPECT_LT((tr.cell_average(cell) - c).norm(), 1e-12);
    }
    EXPECT_LT(tr.l2_error([c](const Vec&, double) { return c; }, 0.0), 1e-12);
    EXPECT_THROW(tr.advance(9, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.num_sum_dofs()))), std::logic_error);
}

TEST(Displacement, TaylorStartAndConstantForce)
{
    // u'' = F / rho with constant F and zero stress: the recursion is exact
    // for quadratics in time
    const Mesh m = unit_square_structured(1);
    const DGSpace s(m, 1);
    MaterialRegion r = space_test_materials();
    r.rho = 2.0;
    const MaterialMap mat = uniform_materials(r, 2);
    const double dt = 0.1;
    const Vec F(1.0, 0.5, 0.0), v0(0.2, 0.0, 0.0);
    DisplacementTrack tr(s, mat, [F](const Vec&, double) { return F; }, dt);
    tr.start_taylor([](const Vec&, double) { return Vec(Vec::Zero()); }, [v0](const Vec&, double) { return v0; });
    for (int n = 1; n <= 4; ++n)
        tr.advance(n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.num_sum_dofs())));
    // central differences of u(t) = v0 t + F t^2 / (2 rho) started from the
    // Taylor values u(-dt/2), u(dt/2) without the quadratic term
    const double t = 4.5 * dt;
    // the Taylor start drops F dt^2/(8 rho) at both ends, a constant offset
    const Vec expect = v0 * t + F * (t * t / (2 * r.rho)) - F * (dt * dt / (8 * r.rho));
    EXPECT_LT((tr.cell_average(0) - expect).norm(), 1e-12);
}

TEST(ElasticEnergy, ZeroAndCoercive)
{
    const Mesh m = unit_square_structured(2);
    const DGSpace s(m, 1);
    const MaterialMap mat = uniform_materials(space_test_materials(), 2);
    const auto n = static_cast<Eigen::Index>(s.num_dofs());
    EXPECT_EQ(elastic_energy(s, mat, BlockVector::Zero(n)), 0.0);
    std::mt19937 rng(1);
    BlockVector x = random_vector(rng, n);
    for (std::size_t c = 0; c < m.num_cells(); ++c)
        x.segment(static_cast<Eigen::Index>(s.zeta_offset(c)), s.block_size()).setZero();
    EXPECT_GT(elastic_energy(s, mat, x), 0.0);
}

TEST(ElasticEnergy, MatchesMatrixAndMassBlock)
{
    const Mesh m = perforated_square(4, 2, 0.25);
    const DGSpace s(m, 2);
    const MaterialMap mat = uniform_materials(space_test_materials(), 2);
    const SparseMatrix M = elastic_energy_matrix(s, mat);
    const SparseMatrix MA = assemble_mass_A(s, mat);
    std::mt19937 rng(2);
    const BlockVector x = random_vector(rng, static_cast<Eigen::Index>(s.num_dofs()));
    const double e = elastic_energy(s, mat, x);
    EXPECT_NEAR(e, 0.5 * x.dot(M * x), 1e-12 * std::abs(e));
    // the gamma block of M_A is the A mass: E = 1/2 g^T M_g (g + z)
    BlockVector g = x;
    for (std::size_t c = 0; c < m.num_cells(); ++c)
        g.segment(static_cast<Eigen::Index>(s.zeta_offset(c)), s.block_size()).setZero();
    const BlockVector w = expand_gamma(s, sum_blocks(s, x));
    EXPECT_NEAR(e, 0.5 * g.dot(MA * w), 1e-12 * std::abs(e));
}

TEST(DiscreteEnergy, ZeroStates)
{
    const Mesh m = unit_square_structured(2);
    const DGSpace s(m, 1);
    const MaterialMap mat = uniform_materials(space_test_materials(), 2);
    const BlockVector z = BlockVector::Zero(static_cast<Eigen::Index>(s.num_dofs()));
    const EnergyValues e = discrete_energy(s, mat, 5.0, z, z, 0.1);
    EXPECT_EQ(e.E, 0.0);
    EXPECT_EQ(e.shifted, 0.0);
}

TEST(DiscreteEnergy, PartsMatchAssembledOperatorsAndBounds)
{
    const Mesh m = unit_square_structured(3, {BoundaryRule::where(on_plane(1, 0.0), FacetKind::dirichlet),
                                              BoundaryRule::everywhere(FacetKind::neumann)});
    const DGSpace s(m, 1);
    MaterialRegion r = space_test_materials();
    r.rho = 1.7;
    const MaterialMap mat = uniform_materials(r, 2);
    const double a = 5.0, dt = 0.05;
    const AssembledSystem sys = assemble_system(s, mat, a);
    const StiffnessParts parts = assemble_stiffness_parts(s, mat, a);
    const auto [alpha_c, m_c] = compliance_bounds(mat.law_C(1), 2);
    const auto [alpha_v, m_v] = compliance_bounds(mat.law_V(1), 2);
    const double alpha = std::min(alpha_c, alpha_v), M = std::max(m_c, m_v);

    std::mt19937 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const BlockVector Xk = random_vector(rng, static_cast<Eigen::Index>(s.num_dofs()));
        const BlockVector Xk1 = random_vector(rng, static_cast<Eigen::Index>(s.num_dofs()));
        const EnergyValues e = discrete_energy(s, mat, a, Xk, Xk1, dt);
        const BlockVector v = (Xk1 - Xk) / dt;
        const Eigen::VectorXd y = sum_blocks(s, 0.5 * (Xk + Xk1));

        EXPECT_NEAR(e.kinetic, 0.5 * v.dot(sys.M_A * v), 1e-11 * e.kinetic);
        EXPECT_NEAR(e.div_part, 0.5 * y.dot(parts.volume * y), 1e-11 * e.div_part);
        EXPECT_NEAR(e.jump_part, 0.5 * y.dot(parts.penalty * y), 1e-11 * e.jump_part);
        EXPECT_NEAR(e.coupling, -0.5 * y.dot(parts.consistency * y), 1e-10 * (e.div_part + e.jump_part));
        EXPECT_NEAR(e.E, e.kinetic + e.div_part + e.jump_part, 1e-12 * e.E);
        EXPECT_NEAR(e.shifted, e.E - e.coupling, 1e-12 * e.E);
        EXPECT_NEAR(shifted_energy(s, sys, Xk, Xk1, dt), e.shifted, 1e-10 * e.E);

        // equivalence with the seminorm sum |v|^2 + |div y|^2 + |h^-1/2 jump y|^2
        const double v2 = tensor_l2_sq(s, v);
        const double div2 = 2.0 * r.rho * e.div_part;
        const double jump2 = 2.0 * e.jump_part / a;
        const double semi = v2 + div2 + jump2;
        const double cminus = std::min({alpha / 2, 1.0 / (2 * r.rho), a / 2});
        const double cplus = std::max({M / 2, 1.0 / (2 * r.rho), a / 2});
        EXPECT_GE(e.E, cminus * semi * (1 - 1e-12));
        EXPECT_LE(e.E, cplus * semi * (1 + 1e-12));
        EXPECT_GE(e.kinetic, 0.5 * alpha * v2 * (1 - 1e-12));
        EXPECT_LE(e.kinetic, 0.5 * M * v2 * (1 + 1e-12));
    }
}

TEST(Norms, StressNormsAndEnergyNorm)
{
    const Mesh m = unit_square_structured(2);
    const DGSpace s(m, 1);
    std::mt19937 rng(4);
    BlockVector x = random_vector(rng, static_cast<Eigen::Index>(s.num_dofs()));
    StressNorms n = stress_norms(s, x);
    EXPECT_LE(n.sum, n.gamma + n.zeta + 1e-12);
    Eigen::VectorXd g(static_cast<Eigen::Index>(s.num_sum_dofs()));
    for (std::size_t c = 0; c < m.num_cells(); ++c)
        g.segment(static_cast<Eigen::Index>(s.sum_offset(c)), s.block_size()) =
            x.segment(static_cast<Eigen::Index>(s.gamma_offset(c)), s.block_size());
    EXPECT_NEAR(n.gamma * n.gamma, tensor_l2_sq(s, g), 1e-12 * n.gamma * n.gamma);
    for (std::size_t c = 0; c < m.num_cells(); ++c)
        x.segment(static_cast<Eigen::Index>(s.zeta_offset(c)), s.block_size()) =
            -x.segment(static_cast<Eigen::Index>(s.gamma_offset(c)), s.block_size());
    n = stress_norms(s, x);
    EXPECT_LT(n.sum, 1e-13);
    EXPECT_NEAR(n.gamma, n.zeta, 1e-13);

    const SparseMatrix MA = assemble_mass_A(s, uniform_materials(space_test_materials(), 2));
    EXPECT_NEAR(state_energy_norm(MA, x), std::sqrt(x.dot(MA * x)), 1e-13);
}

TEST(Probes, PointValuesAndLocation)
{
    const Mesh m = unit_square_structured(3);
    const DGSpace s(m, 1);
    auto f = [](const Vec& x, double) {
        Mat3 g = Mat3::Zero();
        g(0, 0) = 1.0 + x.x();
        g(1, 1) = -x.y();
        Mat3 z = Mat3::Zero();
        z(0, 1) = z(1, 0) = 2.0 * x.x() - x.y();
        return std::make_pair(g, z);
    };
    const BlockVector X = l2_project(s, f, 0.0);
    const Vec p(0.41, 0.77, 0.0);
    const StressProbe pr = probe_stress(s, X, p);
    const auto [g, z] = f(p, 0.0);
    EXPECT_GE(pr.cell, 0);
    EXPECT_LT((pr.gamma - g).norm(), 1e-12);
    EXPECT_LT((pr.zeta - z).norm(), 1e-12);
    EXPECT_LT((pr.sigma - g - z).norm(), 1e-12);
    EXPECT_EQ(locate_probe(m, p), pr.cell);
    EXPECT_THROW(locate_probe(m, Vec(1.2, 0.5, 0.0)), ConfigError);

    // constant fields have cell magnitudes equal to their Frobenius norm
    Mat3 T = Mat3::Zero();
    T(0, 0) = 3.0;
    T(0, 1) = T(1, 0) = 4.0;
    const BlockVector C = l2_project(s, [&](const Vec&, double) { return std::make_pair(T, Mat3(-T)); }, 0.0);
    const CellMagnitudes cm = cell_stress_magnitudes(s, C);
    ASSERT_EQ(cm.gamma.size(), m.num_cells());
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        EXPECT_NEAR(cm.gamma[c], T.norm(), 1e-12);
        EXPECT_NEAR(cm.zeta[c], T.norm(), 1e-12);
        EXPECT_NEAR(cm.sum[c], 0.0, 1e-12);
    }
}
