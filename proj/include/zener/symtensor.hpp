#pragma once

#include "zener/types.hpp"

#include <Eigen/Core>

#include <array>

namespace zener {

// Symmetric tensors are passed around as full 3x3 matrices (zero third
// row/column in 2D). Component vectors use the ordering
//   2D: (xx, yy, xy)      3D: (xx, yy, zz, yz, xz, xy)
// and store each off-diagonal entry once.

inline int nsym(int dim) { return dim * (dim + 1) / 2; }

/// Index pair (p, q) of component a.
inline std::array<int, 2> sym_pair(int dim, int a)
{
    static constexpr std::array<std::array<int, 2>, 3> pairs2{{{0, 0}, {1, 1}, {0, 1}}};
    static constexpr std::array<std::array<int, 2>, 6> pairs3{{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
    return dim == 2 ? pairs2[a] : pairs3[a];
}

/// Weight of component a in the Frobenius product of component vectors.
inline double sym_weight(int dim, int a)
{
    const auto pq = sym_pair(dim, a);
    return pq[0] == pq[1] ? 1.0 : 2.0;
}

/// Canonical symmetric unit tensor E_a (ones at (p,q) and (q,p)).
inline Mat3 sym_unit(int dim, int a)
{
    const auto pq = sym_pair(dim, a);
    Mat3 e = Mat3::Zero();
    e(pq[0], pq[1]) = 1.0;
    e(pq[1], pq[0]) = 1.0;
    return e;
}

inline Eigen::VectorXd to_components(const Mat3& t, int dim)
{
    Eigen::VectorXd c(nsym(dim));
    for (int a = 0; a < nsym(dim); ++a) {
        const auto pq = sym_pair(dim, a);
        c[a] = t(pq[0], pq[1]);
    }
    return c;
}

template <typename Derived>
Mat3 from_components(const Eigen::MatrixBase<Derived>& c, int dim)
{
    Mat3 t = Mat3::Zero();
    for (int a = 0; a < nsym(dim); ++a) {
        const auto pq = sym_pair(dim, a);
        t(pq[0], pq[1]) = c[a];
        t(pq[1], pq[0]) = c[a];
    }
    return t;
}

/// Full contraction sigma : tau.
inline double contract(const Mat3& s, const Mat3& t) { return s.cwiseProduct(t).sum(); }

/// Weighted Frobenius product of component vectors; equals contract() on
/// the corresponding matrices.
template <typename A, typename B>
double sym_dot(const Eigen::MatrixBase<A>& s, const Eigen::MatrixBase<B>& t, int dim)
{
    double r = 0.0;
    for (int a = 0; a < nsym(dim); ++a)
        r += sym_weight(dim, a) * s[a] * t[a];
    return r;
}

inline Mat3 symmetric_part(const Mat3& g) { return 0.5 * (g + g.transpose()); }

/// Identity of the d-dimensional space, embedded in 3x3.
inline Mat3 identity_d(int dim)
{
    Mat3 i = Mat3::Zero();
    for (int p = 0; p < dim; ++p)
        i(p, p) = 1.0;
    return i;
}

} // namespace zener
