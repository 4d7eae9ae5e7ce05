#include "zener/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zener {

double reference_volume(int dim)
{
    switch (dim) {
    case 1: return 1.0;
    case 2: return 0.5;
    case 3: return 1.0 / 6.0;
    default: throw std::invalid_argument("reference simplex dimension must be 1, 2 or 3");
    }
}

QuadratureRule gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: need at least one point");
    QuadratureRule rule;
    rule.dim = 1;
    rule.degree = 2 * n - 1;
    rule.points.resize(n, Vec::Zero());
    rule.weights.resize(n);

    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i].x() = 0.5 * (1.0 - x);
        rule.weights[i] = 0.5 * w;
    }
    return rule;
}

QuadratureRule simplex_rule(int dim, int degree)
{
    if (degree < 0)
        throw std::invalid_argument("simplex_rule: negative degree");
    QuadratureRule rule;
    rule.dim = dim;
    rule.degree = degree;

    if (dim == 1) {
        rule = gauss_legendre((degree + 2) / 2);
        rule.degree = degree;
        return rule;
    }
    if (dim == 2) {
        // x = u (1 - v), y = v; Jacobian (1 - v) adds one degree in v
        const QuadratureRule g = gauss_legendre((degree + 3) / 2);
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (std::size_t j = 0; j < g.size(); ++j) {
                const double u = g.points[i].x(), v = g.points[j].x();
                rule.points.emplace_back(u * (1.0 - v), v, 0.0);
                rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - v));
            }
        }
        return rule;
    }
    if (dim == 3) {
        // x = u (1-v)(1-w), y = v (1-w), z = w; Jacobian (1-v)(1-w)^2
        const QuadratureRule g = gauss_legendre((degree + 4) / 2);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j)
                for (std::size_t l = 0; l < g.size(); ++l) {
                    const double u = g.points[i].x(), v = g.points[j].x(), w = g.points[l].x();
                    rule.points.emplace_back(u * (1.0 - v) * (1.0 - w), v * (1.0 - w), w);
                    rule.weights.push_back(g.weights[i] * g.weights[j] * g.weights[l] * (1.0 - v)
                                           * (1.0 - w) * (1.0 - w));
                }
        return rule;
    }
    throw std::invalid_argument("simplex_rule: dimension must be 1, 2 or 3");
}

} // namespace zener
