#include "zener/assembly.hpp"
#include "zener/linsolve.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cstring>

using namespace zener;
using zener::testing::random_vector;

namespace {

SparseMatrix random_spd(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    Eigen::MatrixXd A(n, n);
    for (int j = 0; j < n; ++j)
        A.col(j) = random_vector(rng, n);
    const Eigen::MatrixXd L = A.transpose() * A + Eigen::MatrixXd::Identity(n, n);
    return L.sparseView();
}

SparseMatrix identity(int n)
{
    SparseMatrix I(n, n);
    I.setIdentity();
    return I;
}

MaterialRegion region()
{
    MaterialRegion r;
    r.law_C = lame_from_young_poisson(1.0, 0.25);
    r.law_D = lame_from_young_poisson(10.0, 0.4);
    r.omega = 0.01;
    return r;
}

SparseMatrix step_operator(const DGSpace& s, double a, double dt)
{
    const AssembledSystem sys = assemble_system(s, uniform_materials(region(), s.dim()), a);
    return SparseMatrix(sys.M_A / (dt * dt) + sys.M_damp / (2 * dt) + 0.25 * sys.S);
}

} // namespace

TEST(Solver, IdentityReturnsRhs)
{
    for (SolverMethod m : {SolverMethod::conjugate_gradient, SolverMethod::direct}) {
        SolverOptions o;
        o.method = m;
        SolverHandle h = setup_solver(identity(20), o);
        std::mt19937 rng(1);
        const Eigen::VectorXd b = random_vector(rng, 20);
        EXPECT_LT((h.solve(b) - b).norm(), 1e-14 * b.norm());
    }
}

TEST(Solver, RandomSpdResidual)
{
    const SparseMatrix L = random_spd(50, 9);
    std::mt19937 rng(2);
    const Eigen::VectorXd b = random_vector(rng, 50);
    for (SolverMethod m : {SolverMethod::conjugate_gradient, SolverMethod::direct}) {
        SolverOptions o;
        o.method = m;
        SolverHandle h(L, o);
        const Eigen::VectorXd x = h.solve(b);
        EXPECT_LE((L * x - b).norm() / b.norm(), 1e-10);
        EXPECT_LE(h.last_stats().relative_residual, 1e-10);
    }
}

TEST(Solver, ZeroRhsZeroIterations)
{
    SolverOptions o;
    o.method = SolverMethod::conjugate_gradient;
    SolverHandle h(random_spd(10, 3), o);
    const Eigen::VectorXd x = h.solve(Eigen::VectorXd::Zero(10));
    EXPECT_EQ(x.norm(), 0.0);
    EXPECT_EQ(h.last_stats().iterations, 0);
}

TEST(Solver, RecoversManufacturedSolution)
{
    const SparseMatrix L = random_spd(40, 4);
    std::mt19937 rng(5);
    const Eigen::VectorXd xs = random_vector(rng, 40);
    const Eigen::VectorXd b = L * xs;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(L)};
    const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    SolverOptions o;
    o.method = SolverMethod::conjugate_gradient;
    o.block_size = 0;
    SolverHandle h(L, o);
    EXPECT_LE((h.solve(b) - xs).norm() / xs.norm(), o.tol * cond);
}

TEST(Solver, ReusableAcrossSolves)
{
    const SparseMatrix L = random_spd(30, 6);
    SolverOptions o;
    o.method = SolverMethod::conjugate_gradient;
    SolverHandle h(L, o);
    std::mt19937 rng(7);
    long total = 0;
    for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXd b = random_vector(rng, 30);
        EXPECT_LE((L * h.solve(b) - b).norm(), 1e-10 * b.norm());
        total += h.last_stats().iterations;
    }
    EXPECT_EQ(h.total_iterations(), total);
}

TEST(Solver, IterationLimitRaisesConvergenceError)
{
    SolverOptions o;
    o.method = SolverMethod::conjugate_gradient;
    o.max_iterations = 2;
    o.block_size = 0;
    SolverHandle h(random_spd(50, 8), o);
    std::mt19937 rng(9);
    try {
        h.solve(random_vector(rng, 50));
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.residual(), 1e-10);
        EXPECT_EQ(h.last_stats().iterations, 2);
    }
}

TEST(Solver, DefaultIterationCap)
{
    SolverOptions o;
    o.method = SolverMethod::conjugate_gradient;
    EXPECT_EQ(SolverHandle(identity(10), o).options().max_iterations, 0);
    EXPECT_EQ(o.tol, 1e-10);
}

TEST(Solver, InvalidInput)
{
    SparseMatrix rect(3, 4);
    EXPECT_THROW(SolverHandle(rect, {}), std::invalid_argument);
    SolverOptions bad;
    bad.tol = 0.0;
    EXPECT_THROW(SolverHandle(identity(3), bad), std::invalid_argument);
    SolverOptions blocks;
    blocks.method = SolverMethod::conjugate_gradient;
    blocks.block_size = 2;
    EXPECT_THROW(SolverHandle(identity(3), blocks), std::invalid_argument);
    SolverHandle h(identity(3), {});
    EXPECT_THROW(h.solve(Eigen::VectorXd::Ones(4)), std::invalid_argument);
    Eigen::VectorXd nan = Eigen::VectorXd::Ones(3);
    nan[1] = std::nan("");
    EXPECT_THROW(h.solve(nan), NumericalError);
}

TEST(Solver, AutomaticSelection)
{
    SolverOptions o;
    o.direct_limit = 10;
    EXPECT_EQ(SolverHandle(identity(10), o).options().method, SolverMethod::direct);
    EXPECT_EQ(std::strcmp(SolverHandle(identity(11), o).backend(), "cg"), 0);
    EXPECT_NE(std::strcmp(SolverHandle(identity(10), o).backend(), "cg"), 0);
}

TEST(Solver, IndefiniteWithoutPenaltyIsDiagnosed)
{
    // a = 0 leaves only the volume and consistency terms, which are
    // indefinite; with a large step the mass shift cannot repair it
    const Mesh m = unit_square_structured(1, {BoundaryRule::everywhere(FacetKind::neumann)});
    const DGSpace s(m, 1);
    const SparseMatrix L = step_operator(s, 0.0, 1e3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(L)};
    ASSERT_LT(es.eigenvalues().minCoeff(), 0.0);

    SolverOptions direct;
    direct.method = SolverMethod::direct;
    try {
        SolverHandle h(L, direct);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("a*"), std::string::npos) << e.what();
    }

    // CG fails as well: a curvature breakdown or the iteration cap
    SolverOptions cg;
    cg.method = SolverMethod::conjugate_gradient;
    cg.block_size = 0;
    SolverHandle h(L, cg);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(L.rows());
    // load the most negative eigenvector so CG meets it in the first step
    b = es.eigenvectors().col(0);
    EXPECT_THROW(h.solve(b), NumericalError);
}

TEST(Solver, PreconditionedMatchesUnpreconditioned)
{
    const Mesh m = unit_square_structured(4);
    const DGSpace s(m, 1);
    const SparseMatrix L = step_operator(s, 5.0, 0.05);
    std::mt19937 rng(10);
    const Eigen::VectorXd b = random_vector(rng, L.rows());
    SolverOptions plain;
    plain.method = SolverMethod::conjugate_gradient;
    plain.block_size = 0;
    SolverOptions pre = plain;
    pre.block_size = s.dofs_per_cell();
    SolverHandle hp(L, plain), hb(L, pre);
    const Eigen::VectorXd xp = hp.solve(b), xb = hb.solve(b);
    EXPECT_LT((xp - xb).norm(), 1e-9 * xp.norm());
    EXPECT_LT(hb.last_stats().iterations, hp.last_stats().iterations);
    SolverOptions direct;
    direct.method = SolverMethod::direct;
    SolverHandle hd(L, direct);
    EXPECT_LT((hd.solve(b) - xb).norm(), 1e-9 * xb.norm());
}
