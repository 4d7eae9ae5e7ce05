#include "zener/mms.hpp"

#include "zener/symtensor.hpp"

#include <cmath>
#include <numbers>

namespace zener {

PairField ExactSolution::pair() const
{
    return [g = gamma, z = zeta](const Vec& x, double t) { return std::make_pair(g(x, t), z(x, t)); };
}

PairField ExactSolution::pair_dot() const
{
    return [g = gamma_dot, z = zeta_dot](const Vec& x, double t) { return std::make_pair(g(x, t), z(x, t)); };
}

ExactSolution zener_exponential_mms(const DisplacementProfile& profile, double c, const MaterialRegion& region,
                                    int dim, double a_star)
{
    if (region.omega == 1.0)
        throw std::invalid_argument("exponential manufactured solution is resonant for omega = 1");
    const double beta = region.omega / (region.omega - 1.0);

    IsotropicLaw visco; // D - C, the law driving zeta
    visco.mu = region.law_D.mu - region.law_C.mu;
    visco.lambda = region.law_D.lambda - region.law_C.lambda;
    // sigma = gamma + zeta = (C + beta (D - C)) eps(u)
    IsotropicLaw total;
    total.mu = region.law_C.mu + beta * visco.mu;
    total.lambda = region.law_C.lambda + beta * visco.lambda;
    const IsotropicLaw lawC = region.law_C;

    ExactSolution ex;
    ex.dim = dim;
    ex.region = region;
    ex.a_star = a_star;

    auto U = profile.value;
    auto G = profile.gradient;
    auto H = profile.hessian;
    auto amp = [c](double t) { return c * std::exp(-t); };
    auto eps = [G, amp](const Vec& x, double t) -> Mat3 { return symmetric_part(G(x)) * amp(t); };

    ex.u = [U, amp](const Vec& x, double t) { return Vec(U(x) * amp(t)); };
    ex.u_dot = [U, amp](const Vec& x, double t) { return Vec(-U(x) * amp(t)); };
    ex.u_ddot = ex.u;
    ex.gamma = [eps, lawC, dim](const Vec& x, double t) { return apply_hooke(lawC, eps(x, t), dim); };
    ex.zeta = [eps, visco, beta, dim](const Vec& x, double t) { return Mat3(beta * apply_hooke(visco, eps(x, t), dim)); };
    ex.gamma_dot = [g = ex.gamma](const Vec& x, double t) { return Mat3(-g(x, t)); };
    ex.zeta_dot = [z = ex.zeta](const Vec& x, double t) { return Mat3(-z(x, t)); };

    ex.div_sigma = [H, amp, total, dim](const Vec& x, double t) {
        const auto h = H(x);
        Vec lap = Vec::Zero(), grad_div = Vec::Zero();
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                lap[i] += h[i](j, j);
                grad_div[i] += h[j](j, i);
            }
        return Vec((total.mu * lap + (total.mu + total.lambda) * grad_div) * amp(t));
    };
    const double rho = region.rho;
    ex.F = [u = ex.u, ds = ex.div_sigma, rho](const Vec& x, double t) { return Vec(rho * u(x, t) - ds(x, t)); };
    ex.g_D = ex.u;
    ex.g_D_ddot = ex.u;
    ex.g_N = [g = ex.gamma, z = ex.zeta](const Vec& x, const Vec& n, double t) {
        return Vec((g(x, t) + z(x, t)) * n);
    };
    return ex;
}

MaterialRegion space_test_materials()
{
    MaterialRegion r;
    r.law_C = lame_from_young_poisson(1.0, 0.25);
    r.law_D = lame_from_young_poisson(10.0, 0.4);
    r.rho = 1.0;
    r.omega = 0.01;
    return r;
}

MaterialRegion time_test_materials()
{
    MaterialRegion r;
    r.law_C = lame_from_young_poisson(10.0, 0.4);
    r.law_D = lame_from_young_poisson(20.0, 0.45);
    r.rho = 1.0;
    r.omega = 2.0;
    return r;
}

ExactSolution example1_space_solution(const MaterialRegion& region)
{
    const double s = region.law_C.lambda + region.law_D.lambda;
    constexpr double pi = std::numbers::pi;
    DisplacementProfile p;
    p.value = [s](const Vec& x) {
        return Vec(std::cos(pi * x.x()) * std::sin(pi * x.y()) + x.x() * x.x() / s,
                   -std::sin(pi * x.x()) * std::cos(pi * x.y()) + x.y() * x.y() / s, 0.0);
    };
    p.gradient = [s](const Vec& x) {
        const double cx = std::cos(pi * x.x()), sx = std::sin(pi * x.x());
        const double cy = std::cos(pi * x.y()), sy = std::sin(pi * x.y());
        Mat3 g = Mat3::Zero();
        g(0, 0) = -pi * sx * sy + 2.0 * x.x() / s;
        g(0, 1) = pi * cx * cy;
        g(1, 0) = -pi * cx * cy;
        g(1, 1) = pi * sx * sy + 2.0 * x.y() / s;
        return g;
    };
    p.hessian = [s](const Vec& x) {
        const double cx = std::cos(pi * x.x()), sx = std::sin(pi * x.x());
        const double cy = std::cos(pi * x.y()), sy = std::sin(pi * x.y());
        const double p2 = pi * pi;
        std::array<Mat3, 3> h{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
        // U_0 = cx sy + x^2/s
        h[0](0, 0) = -p2 * cx * sy + 2.0 / s;
        h[0](0, 1) = h[0](1, 0) = -p2 * sx * cy;
        h[0](1, 1) = -p2 * cx * sy;
        // U_1 = -sx cy + y^2/s
        h[1](0, 0) = p2 * sx * cy;
        h[1](0, 1) = h[1](1, 0) = p2 * cx * sy;
        h[1](1, 1) = p2 * sx * cy + 2.0 / s;
        return h;
    };
    return zener_exponential_mms(p, 2.0, region, 2, 5.0);
}

ExactSolution example1_time_solution(const MaterialRegion& region)
{
    const double s = region.law_C.lambda + region.law_D.lambda;
    DisplacementProfile p;
    p.value = [s](const Vec& x) {
        return Vec(x.x() * x.y() + x.x() * x.x() / s, x.x() * x.y() + x.y() * x.y() / s, 0.0);
    };
    p.gradient = [s](const Vec& x) {
        Mat3 g = Mat3::Zero();
        g(0, 0) = x.y() + 2.0 * x.x() / s;
        g(0, 1) = x.x();
        g(1, 0) = x.y();
        g(1, 1) = x.x() + 2.0 * x.y() / s;
        return g;
    };
    p.hessian = [s](const Vec&) {
        std::array<Mat3, 3> h{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
        h[0](0, 0) = 2.0 / s;
        h[0](0, 1) = h[0](1, 0) = 1.0;
        h[1](0, 1) = h[1](1, 0) = 1.0;
        h[1](1, 1) = 2.0 / s;
        return h;
    };
    return zener_exponential_mms(p, 1.0, region, 2, 10.0);
}

LoadData load_data(const ExactSolution& exact)
{
    LoadData d;
    d.F = exact.F;
    d.g_D = exact.g_D;
    d.g_D_ddot = exact.g_D_ddot;
    d.g_N = exact.g_N;
    return d;
}

} // namespace zener
