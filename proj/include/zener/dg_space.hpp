#pragma once

#include "zener/basis.hpp"
#include "zener/mesh.hpp"
#include "zener/quadrature.hpp"
#include "zener/symtensor.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace zener {

/// Coefficients of a (gamma, zeta) pair over all cells. Per cell the gamma
/// block comes first, then the zeta block; inside a block the layout is
/// component-major: entry a * npoly + i multiplies phi_i E_a.
using BlockVector = Eigen::VectorXd;

using TensorField = std::function<Mat3(const Vec& x, double t)>;
using PairField = std::function<std::pair<Mat3, Mat3>(const Vec& x, double t)>;

/// Physical basis data at a set of points. The scalar modes are the
/// reference orthonormal modes divided by sqrt(det J), so they are
/// orthonormal on every cell.
struct BasisValues {
    std::vector<Vec> points;
    Eigen::VectorXd weights;                  ///< physical quadrature weights (empty when evaluated at points)
    Eigen::MatrixXd phi;                      ///< npoints x npoly
    std::array<Eigen::MatrixXd, 3> dphi;      ///< d/dx_p, each npoints x npoly
};

class DGSpace {
public:
    /// quad_degree < 0 selects 2k + 2 for cells and facets.
    DGSpace(const Mesh& mesh, int k, int quad_degree = -1);

    const Mesh& mesh() const { return *mesh_; }
    int degree() const { return k_; }
    int dim() const { return mesh_->dim(); }
    int nsym() const { return nsym_; }
    int npoly() const { return npoly_; }
    int quad_degree() const { return quad_degree_; }

    /// Entries of one tensor block (gamma or zeta) of a cell.
    int block_size() const { return nsym_ * npoly_; }
    int dofs_per_cell() const { return 2 * block_size(); }
    std::size_t num_dofs() const { return mesh_->num_cells() * static_cast<std::size_t>(dofs_per_cell()); }
    /// Size of the single-tensor space used for sums gamma + zeta.
    std::size_t num_sum_dofs() const { return mesh_->num_cells() * static_cast<std::size_t>(block_size()); }

    std::size_t gamma_offset(std::size_t c) const { return c * static_cast<std::size_t>(dofs_per_cell()); }
    std::size_t zeta_offset(std::size_t c) const { return gamma_offset(c) + block_size(); }
    std::size_t sum_offset(std::size_t c) const { return c * static_cast<std::size_t>(block_size()); }

    const ScalarBasis& basis() const { return basis_; }
    const QuadratureRule& cell_rule() const { return cell_rule_; }
    const QuadratureRule& facet_rule() const { return facet_rule_; }

    /// Basis data on the quadrature points of cell c.
    BasisValues cell_values(std::size_t c) const;
    /// Same with a different rule (e.g. for higher-order loads).
    BasisValues cell_values(std::size_t c, const QuadratureRule& rule) const;
    /// Basis data of owner `side` (0 or 1) on the quadrature points of facet f.
    BasisValues facet_values(std::size_t f, int side) const;
    /// Facet quadrature points and physical weights.
    std::pair<std::vector<Vec>, Eigen::VectorXd> facet_quadrature(std::size_t f) const;

    /// Basis data at arbitrary physical points of cell c.
    BasisValues eval_basis(std::size_t c, const std::vector<Vec>& points) const;

    /// Tensor value at row q of `bv` given one tensor block of coefficients.
    template <typename Seg>
    Mat3 tensor_at(const BasisValues& bv, int q, const Seg& coeffs) const
    {
        Eigen::VectorXd comp(nsym_);
        for (int a = 0; a < nsym_; ++a)
            comp[a] = bv.phi.row(q).dot(coeffs.segment(a * npoly_, npoly_));
        return from_components(comp, dim());
    }

    /// Row-wise divergence at row q of `bv` given one tensor block.
    template <typename Seg>
    Vec div_at(const BasisValues& bv, int q, const Seg& coeffs) const
    {
        Vec d = Vec::Zero();
        for (int a = 0; a < nsym_; ++a) {
            const auto pq = sym_pair(dim(), a);
            const auto c = coeffs.segment(a * npoly_, npoly_);
            if (pq[0] == pq[1]) {
                d[pq[0]] += bv.dphi[pq[0]].row(q).dot(c);
            } else {
                d[pq[0]] += bv.dphi[pq[1]].row(q).dot(c);
                d[pq[1]] += bv.dphi[pq[0]].row(q).dot(c);
            }
        }
        return d;
    }

private:
    BasisValues map_reference(std::size_t c, const std::vector<Vec>& ref_points) const;

    const Mesh* mesh_;
    int k_;
    int nsym_;
    int npoly_;
    int quad_degree_;
    ScalarBasis basis_;
    QuadratureRule cell_rule_;
    QuadratureRule facet_rule_;
    // reference tables on the cell rule
    Eigen::MatrixXd ref_phi_;
    std::array<Eigen::MatrixXd, 3> ref_dphi_;
};

/// Divergence of the tensor basis function with local single-block index
/// `dof` (= a * npoly + i) of cell c at the given points.
std::vector<Vec> tensor_div(const DGSpace& space, std::size_t c, const std::vector<Vec>& points, int dof);

/// Elementwise L2 projection of a (gamma, zeta) pair field at time t.
/// Throws NumericalError on a non-finite field value.
BlockVector l2_project(const DGSpace& space, const PairField& field, double t);

/// Elementwise L2 projection of a single tensor field into the sum space.
Eigen::VectorXd l2_project_tensor(const DGSpace& space, const TensorField& field, double t);

/// Per-cell sum gamma + zeta as a single-tensor coefficient vector.
Eigen::VectorXd sum_blocks(const DGSpace& space, const BlockVector& x);

/// Block vector with the given single-tensor vector in the gamma slots
/// and zero zeta slots.
BlockVector expand_gamma(const DGSpace& space, const Eigen::VectorXd& s);

} // namespace zener
