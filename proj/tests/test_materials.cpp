#include "zener/materials.hpp"
#include "zener/symtensor.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace zener;

TEST(Lame, TableParameters)
{
    const IsotropicLaw a = lame_from_young_poisson(10.0, 0.4);
    EXPECT_NEAR(a.mu, 3.5714, 5e-5);
    EXPECT_NEAR(a.lambda, 14.2857, 5e-5);
    const IsotropicLaw b = lame_from_young_poisson(1.0, 0.25);
    EXPECT_NEAR(b.mu, 0.4, 1e-15);
    EXPECT_NEAR(b.lambda, 0.4, 1e-15);
    const IsotropicLaw c = lame_from_young_poisson(20.0, 0.45);
    EXPECT_NEAR(c.mu, 6.8966, 5e-5);
    EXPECT_NEAR(c.lambda, 62.0689, 5e-4);
    EXPECT_FALSE(c.plane_stress_reduced);
}

TEST(Lame, RejectsIncompressibleAndNonPositive)
{
    EXPECT_THROW(lame_from_young_poisson(1.0, 0.5), MaterialError);
    EXPECT_THROW(lame_from_young_poisson(1.0, -1.0), MaterialError);
    EXPECT_THROW(lame_from_young_poisson(0.0, 0.3), MaterialError);
    EXPECT_THROW(lame_from_young_poisson(1.0, 0.5), std::invalid_argument);
}

TEST(PlaneStress, Examples)
{
    const IsotropicLaw a = plane_stress_adjust({1.0, 0.0});
    EXPECT_EQ(a.mu, 1.0);
    EXPECT_EQ(a.lambda, 0.0);
    const IsotropicLaw b = plane_stress_adjust({1.0, 2.0});
    EXPECT_NEAR(b.lambda, 1.0, 1e-15);
    EXPECT_TRUE(b.plane_stress_reduced);
    // the guard keeps a second application from changing lambda again
    EXPECT_EQ(plane_stress_adjust(b).lambda, b.lambda);
    EXPECT_NE(plane_stress_adjust(IsotropicLaw{1.0, 1.0}).lambda, 1.0);
}

TEST(PlaneStress, MatchesYoungPoissonFormula)
{
    // plane-stress lambda equals E nu / (1 - nu^2)
    const double E = 30e3, nu = 0.3;
    const IsotropicLaw r = plane_stress_adjust(lame_from_young_poisson(E, nu));
    EXPECT_NEAR(r.lambda, E * nu / (1 - nu * nu), 1e-9 * E);
}

TEST(Hooke, Examples)
{
    EXPECT_LT((apply_hooke({1.0, 0.0}, Mat3::Identity(), 3) - 2.0 * Mat3::Identity()).norm(), 1e-15);
    const Mat3 r = apply_hooke({0.4, 0.4}, identity_d(2), 2);
    EXPECT_NEAR(r(0, 0), 1.6, 1e-15);
    EXPECT_NEAR(r(1, 1), 1.6, 1e-15);
    EXPECT_EQ(r(2, 2), 0.0);
}

TEST(Compliance, Examples)
{
    std::mt19937 rng(3);
    const Mat3 t = zener::testing::random_sym(rng, 3);
    EXPECT_LT((apply_compliance({0.5, 0.0}, t, 3) - t).norm(), 1e-15);
    const Mat3 r = apply_compliance({1.0, 1.0}, identity_d(2), 2);
    EXPECT_NEAR(r(0, 0), 0.25, 1e-15);
    EXPECT_NEAR(r(1, 1), 0.25, 1e-15);
    EXPECT_NEAR(r(0, 1), 0.0, 1e-15);
}

TEST(Compliance, RoundTripRandomTensors)
{
    std::mt19937 rng(42);
    const IsotropicLaw laws[] = {lame_from_young_poisson(10.0, 0.4), lame_from_young_poisson(20.0, 0.45),
                                 {0.4, 0.4}, {2.0, -0.5}};
    for (int dim : {2, 3})
        for (const IsotropicLaw& law : laws) {
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                const Mat3 t = zener::testing::random_sym(rng, dim);
                worst = std::max(worst, (apply_compliance(law, apply_hooke(law, t, dim), dim) - t).cwiseAbs().maxCoeff());
                worst = std::max(worst, (apply_hooke(law, apply_compliance(law, t, dim), dim) - t).cwiseAbs().maxCoeff());
            }
            EXPECT_LT(worst, 1e-13) << "dim=" << dim << " mu=" << law.mu;
        }
}

TEST(Compliance, SingularLaw)
{
    EXPECT_THROW(apply_compliance({1.0, -1.0}, Mat3::Identity(), 2), MaterialError);
    EXPECT_THROW(apply_compliance({0.0, 1.0}, Mat3::Identity(), 2), MaterialError);
    EXPECT_NO_THROW(apply_compliance({1.0, -0.6}, Mat3::Identity(), 3));
}

TEST(ViscoCompliance, Subtraction)
{
    MaterialRegion r;
    r.law_C = {0.4, 0.4};
    r.law_D = lame_from_young_poisson(10.0, 0.4);
    const IsotropicLaw v = visco_compliance_law(r, 2);
    EXPECT_NEAR(v.mu, 3.1714, 5e-5);
    EXPECT_NEAR(v.lambda, 13.8857, 5e-5);
    r.law_D = r.law_C;
    EXPECT_THROW(visco_compliance_law(r, 2), MaterialError);
}

TEST(Region, Validation)
{
    MaterialRegion r;
    r.law_C = {0.4, 0.4};
    r.law_D = {1.0, 1.0};
    EXPECT_NO_THROW(validate_region(r, 2));
    MaterialRegion bad = r;
    bad.rho = 0.0;
    EXPECT_THROW(validate_region(bad, 2), MaterialError);
    bad = r;
    bad.omega = -1.0;
    EXPECT_THROW(validate_region(bad, 2), MaterialError);
    bad = r;
    bad.plane_stress = true;
    EXPECT_THROW(validate_region(bad, 3), MaterialError);
    bad = r;
    bad.law_C = {-0.1, 0.4};
    EXPECT_THROW(validate_region(bad, 2), MaterialError);
}

TEST(MaterialMap, PlaneStressAppliedOnce)
{
    MaterialRegion r;
    r.law_C = lame_from_young_poisson(30e3, 0.3);
    r.law_D = lame_from_young_poisson(40e3, 0.49);
    r.plane_stress = true;
    const MaterialMap m = uniform_materials(r, 2);
    EXPECT_TRUE(m.law_C(1).plane_stress_reduced);
    EXPECT_NEAR(m.law_C(1).lambda, plane_stress_adjust(r.law_C).lambda, 1e-12);
    EXPECT_NEAR(m.law_D(1).lambda, plane_stress_adjust(r.law_D).lambda, 1e-12);
    EXPECT_NEAR(m.law_V(1).mu, m.law_D(1).mu - m.law_C(1).mu, 1e-12);
    EXPECT_NEAR(m.law_V(1).lambda, m.law_D(1).lambda - m.law_C(1).lambda, 1e-12);
    // rebuilding from already reduced laws does not reduce again
    const MaterialMap again({{1, m.at(1)}}, 2);
    EXPECT_EQ(again.law_C(1).lambda, m.law_C(1).lambda);
}

TEST(MaterialMap, CoverageAndLookup)
{
    MaterialRegion r;
    r.law_C = {0.4, 0.4};
    r.law_D = {1.0, 1.0};
    r.rho = 2.0;
    r.omega = 0.5;
    MaterialRegion s = r;
    s.rho = 3.0;
    const MaterialMap m({{1, r}, {3, s}}, 2);
    EXPECT_EQ(m.rho(1), 2.0);
    EXPECT_EQ(m.rho(3), 3.0);
    EXPECT_EQ(m.omega(3), 0.5);
    EXPECT_NO_THROW(m.check_covers({1, 3, 1}));
    EXPECT_THROW(m.check_covers({1, 2}), ConfigError);
    EXPECT_THROW(m.at(2), ConfigError);
}

TEST(MaterialMap, RejectsInvalidRegion)
{
    MaterialRegion r;
    r.law_C = {1.0, 1.0};
    r.law_D = {0.5, 1.0};
    EXPECT_THROW(uniform_materials(r, 2), MaterialError);
}
