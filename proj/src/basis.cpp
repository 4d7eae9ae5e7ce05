#include "zener/basis.hpp"

#include "zener/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace zener {

int ScalarBasis::dimension(int dim, int degree)
{
    int n = 1;
    for (int i = 1; i <= dim; ++i)
        n = n * (degree + i) / i;
    return n;
}

ScalarBasis::ScalarBasis(int dim, int degree) : dim_(dim), degree_(degree)
{
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("ScalarBasis: dimension must be 1, 2 or 3");
    if (degree < 0)
        throw std::invalid_argument("ScalarBasis: negative degree");

    // graded ordering: total degree first, so mode 0 is the constant
    for (int p = 0; p <= degree; ++p)
        for (int a = p; a >= 0; --a)
            for (int b = (dim >= 2 ? p - a : 0); b >= 0; --b) {
                const int c = p - a - b;
                if ((dim == 1 && (b != 0 || c != 0)) || (dim == 2 && c != 0))
                    continue;
                exponents_.push_back({a, b, c});
            }

    const int n = size();
    const QuadratureRule q = simplex_rule(dim, 2 * degree);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < q.size(); ++k) {
        const Eigen::VectorXd m = monomials(q.points[k]);
        gram.noalias() += q.weights[k] * m * m.transpose();
    }
    // gram = L L^T; modes L^{-1} m are orthonormal
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericalError("ScalarBasis: monomial Gram matrix is not positive definite");
    coeffs_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd ScalarBasis::monomials(const Vec& xi) const
{
    Eigen::VectorXd m(size());
    for (int i = 0; i < size(); ++i) {
        const auto& e = exponents_[i];
        m[i] = std::pow(xi.x(), e[0]) * std::pow(xi.y(), e[1]) * std::pow(xi.z(), e[2]);
    }
    return m;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> ScalarBasis::monomial_gradients(const Vec& xi) const
{
    Eigen::Matrix<double, Eigen::Dynamic, 3> g = Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(size(), 3);
    auto pw = [](double x, int e) { return e <= 0 ? (e == 0 ? 1.0 : 0.0) : std::pow(x, e); };
    for (int i = 0; i < size(); ++i) {
        const auto& e = exponents_[i];
        const double px = pw(xi.x(), e[0]), py = pw(xi.y(), e[1]), pz = pw(xi.z(), e[2]);
        if (e[0] > 0)
            g(i, 0) = e[0] * pw(xi.x(), e[0] - 1) * py * pz;
        if (e[1] > 0)
            g(i, 1) = e[1] * px * pw(xi.y(), e[1] - 1) * pz;
        if (e[2] > 0)
            g(i, 2) = e[2] * px * py * pw(xi.z(), e[2] - 1);
    }
    return g;
}

Eigen::VectorXd ScalarBasis::values(const Vec& xi) const
{
    return coeffs_ * monomials(xi);
}

Eigen::Matrix<double, Eigen::Dynamic, 3> ScalarBasis::gradients(const Vec& xi) const
{
    return coeffs_ * monomial_gradients(xi);
}

} // namespace zener
