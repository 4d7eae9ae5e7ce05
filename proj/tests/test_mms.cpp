#include "zener/mms.hpp"

#include "mms_oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace zener;

namespace {

using zener::testing::fd_div;
using zener::testing::fd_strain;
using zener::testing::fd_time;

void check_solution(const ExactSolution& ex, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst[3] = {0, 0, 0};
    for (int i = 0; i < 200; ++i) {
        const Vec x(u(rng), u(rng), 0.0);
        const double t = u(rng);
        const auto r = zener::testing::model_residuals(ex, x, t);
        for (int j = 0; j < 3; ++j)
            worst[j] = std::max(worst[j], r[j]);
        // analytic companions
        EXPECT_LT((ex.div_sigma(x, t) - fd_div([&ex](const Vec& y, double s) { return ex.sigma(y, s); }, x, t, 2)).norm(),
                  1e-6 * (1.0 + ex.div_sigma(x, t).norm()));
        EXPECT_LT((ex.gamma_dot(x, t) - fd_time(ex.gamma, x, t)).norm(), 1e-6 * (1.0 + ex.gamma(x, t).norm()));
        EXPECT_LT((ex.u_ddot(x, t) - fd_time(ex.u_dot, x, t)).norm(), 1e-6 * (1.0 + ex.u(x, t).norm()));
    }
    EXPECT_LT(worst[0], 1e-8);
    EXPECT_LT(worst[1], 1e-8);
    EXPECT_LT(worst[2], 1e-6);
}

} // namespace

TEST(Mms, BetaForOmegaTwo)
{
    MaterialRegion r = time_test_materials();
    ASSERT_EQ(r.omega, 2.0);
    const ExactSolution ex = example1_time_solution(r);
    const Vec x(0.3, 0.7, 0.0);
    IsotropicLaw dc{r.law_D.mu - r.law_C.mu, r.law_D.lambda - r.law_C.lambda};
    const Mat3 eps = apply_compliance(r.law_C, ex.gamma(x, 0.2), 2);
    EXPECT_LT((ex.zeta(x, 0.2) - 2.0 * apply_hooke(dc, eps, 2)).norm(), 1e-12);
}

TEST(Mms, BetaForSmallOmega)
{
    const MaterialRegion r = space_test_materials();
    ASSERT_EQ(r.omega, 0.01);
    const ExactSolution ex = example1_space_solution(r);
    const Vec x(0.3, 0.7, 0.0);
    IsotropicLaw dc{r.law_D.mu - r.law_C.mu, r.law_D.lambda - r.law_C.lambda};
    const Mat3 eps = apply_compliance(r.law_C, ex.gamma(x, 0.2), 2);
    const Mat3 expect = (-1.0 / 99.0) * apply_hooke(dc, eps, 2);
    EXPECT_LT((ex.zeta(x, 0.2) - expect).norm(), 1e-12 * (1 + expect.norm()));
}

TEST(Mms, ResonantOmegaRejected)
{
    MaterialRegion r = time_test_materials();
    r.omega = 1.0;
    EXPECT_THROW(example1_time_solution(r), std::invalid_argument);
}

TEST(Mms, SpaceSolutionPointValue)
{
    MaterialRegion r;
    r.law_C = {0.4, 0.4};
    r.law_D = {1.0, 0.4};
    r.omega = 0.01;
    const ExactSolution ex = example1_space_solution(r);
    EXPECT_NEAR(ex.u(Vec(0.5, 0.5, 0.0), 0.0).x(), 0.625, 1e-14);
    EXPECT_EQ(ex.a_star, 5.0);
    EXPECT_EQ(example1_time_solution().a_star, 10.0);
}

TEST(Mms, SpaceSolutionResiduals) { check_solution(example1_space_solution(), 1); }

TEST(Mms, TimeSolutionResiduals) { check_solution(example1_time_solution(), 2); }

TEST(Mms, TimeSolutionIsLinearInSpace)
{
    const ExactSolution ex = example1_time_solution();
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (int i = 0; i < 20; ++i) {
        const Vec x(u(rng), u(rng), 0.0);
        const Vec y(u(rng), u(rng), 0.0);
        // affine fields satisfy f((x+y)/2) = (f(x)+f(y))/2
        const Vec mid = 0.5 * (x + y);
        EXPECT_LT((ex.gamma(mid, 0.3) - 0.5 * (ex.gamma(x, 0.3) + ex.gamma(y, 0.3))).norm(), 1e-13);
        EXPECT_LT((ex.zeta(mid, 0.3) - 0.5 * (ex.zeta(x, 0.3) + ex.zeta(y, 0.3))).norm(), 1e-13);
        EXPECT_LT((ex.div_sigma(x, 0.3) - ex.div_sigma(y, 0.3)).norm(), 1e-13);
    }
}

TEST(Mms, StrainIsSymmetrizedGradient)
{
    const ExactSolution ex = example1_space_solution();
    const MaterialMap mat = ex.materials();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const Vec x(u(rng), u(rng), 0.0);
        const Mat3 eps = apply_compliance(mat.law_C(1), ex.gamma(x, 0.1), 2);
        EXPECT_NEAR(eps(0, 1), fd_strain(ex.u, x, 0.1, 2)(0, 1), 1e-8);
        EXPECT_EQ(eps(0, 1), eps(1, 0));
    }
}

TEST(Mms, TractionMatchesStressTimesNormal)
{
    const ExactSolution ex = example1_space_solution();
    const std::array<std::pair<Vec, Vec>, 4> samples{{{Vec(0.3, 0.0, 0), Vec(0, -1, 0)},
                                                      {Vec(1.0, 0.6, 0), Vec(1, 0, 0)},
                                                      {Vec(0.2, 1.0, 0), Vec(0, 1, 0)},
                                                      {Vec(0.0, 0.4, 0), Vec(-1, 0, 0)}}};
    for (const auto& [x, n] : samples)
        EXPECT_LT((ex.g_N(x, n, 0.4) - ex.sigma(x, 0.4) * n).norm(), 1e-12);
}

TEST(Mms, LoadDataBundle)
{
    const ExactSolution ex = example1_time_solution();
    const LoadData d = load_data(ex);
    ASSERT_TRUE(d.F && d.g_D && d.g_D_ddot && d.g_N);
    const Vec x(0.25, 0.5, 0.0);
    EXPECT_EQ(d.g_D(x, 0.3), ex.u(x, 0.3));
    EXPECT_EQ(d.g_D_ddot(x, 0.3), ex.u_ddot(x, 0.3));
}
