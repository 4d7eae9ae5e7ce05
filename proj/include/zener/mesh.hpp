#pragma once

#include "zener/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zener {

enum class FacetKind : std::uint8_t { interior, dirichlet, neumann, unclassified };

const char* to_string(FacetKind kind);

/// Affine map x = origin + jacobian * xi from the reference simplex.
struct CellGeometry {
    Vec origin = Vec::Zero();
    Mat3 jacobian = Mat3::Identity();
    Mat3 inverse = Mat3::Identity();
    double det = 1.0; ///< positive after canonical reordering
    double volume = 0.0;
    double diameter = 0.0;
    Vec centroid = Vec::Zero();

    Vec to_reference(const Vec& x) const { return inverse * (x - origin); }
    Vec to_physical(const Vec& xi) const { return origin + jacobian * xi; }
};

struct Facet {
    std::array<int, 3> vertices{-1, -1, -1}; ///< d entries used
    std::array<int, 2> owners{-1, -1};       ///< owners[1] < 0 on the boundary
    int tag = 0;                             ///< boundary tag, 0 when untagged
    FacetKind kind = FacetKind::unclassified;

    // geometry
    Vec normal = Vec::Zero(); ///< unit, outward from owners[0]
    double measure = 0.0;
    double diameter = 0.0;
    Vec centroid = Vec::Zero();

    bool is_boundary() const { return owners[1] < 0; }
};

/// Conforming simplicial mesh with region tags and classified facets.
/// Immutable once built; reclassification produces a new mesh.
class Mesh {
public:
    struct BoundaryTag {
        std::array<int, 3> vertices{-1, -1, -1};
        int tag = 0;
    };

    Mesh() = default;

    /// Builds facets and geometry. Cells with negative orientation are
    /// reordered. Throws std::invalid_argument on malformed input.
    Mesh(int dim, std::vector<Vec> vertices, std::vector<std::array<int, 4>> cells,
         std::vector<int> regions, const std::vector<BoundaryTag>& boundary_tags = {});

    int dim() const { return dim_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_cells() const { return cells_.size(); }
    std::size_t num_facets() const { return facets_.size(); }

    const Vec& vertex(std::size_t v) const { return vertices_[v]; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    std::span<const int> cell_vertices(std::size_t c) const
    {
        return {cells_[c].data(), static_cast<std::size_t>(dim_ + 1)};
    }
    int region(std::size_t c) const { return regions_[c]; }
    const std::vector<int>& regions() const { return regions_; }
    const CellGeometry& geometry(std::size_t c) const { return geometry_[c]; }

    const Facet& facet(std::size_t f) const { return facets_[f]; }
    const std::vector<Facet>& facets() const { return facets_; }
    /// Facet index of local face i of cell c (face opposite local vertex i).
    int cell_facet(std::size_t c, int i) const { return cell_facets_[c][i]; }

    /// Largest cell diameter.
    double mesh_size() const;
    double total_volume() const;

    /// F*_h: interior plus Neumann facets; the facets carrying face terms.
    std::vector<int> face_term_facets() const;
    std::size_t count(FacetKind kind) const;

    /// Returns the cell containing x (closure, with tolerance) or -1.
    int locate(const Vec& x, double tol = 1e-10) const;

    /// Copy with the given facet kinds (one entry per facet).
    Mesh with_kinds(const std::vector<FacetKind>& kinds) const;

private:
    void build_facets(const std::vector<BoundaryTag>& boundary_tags);
    void build_geometry();

    int dim_ = 2;
    std::vector<Vec> vertices_;
    std::vector<std::array<int, 4>> cells_;
    std::vector<int> regions_;
    std::vector<CellGeometry> geometry_;
    std::vector<Facet> facets_;
    std::vector<std::array<int, 4>> cell_facets_;
};

// -- facet classification ----------------------------------------------------

using FacetPredicate = std::function<bool(const Vec& centroid)>;

/// Boundary facets are matched first by tag rules, then by the first
/// predicate rule that accepts the facet centroid.
struct BoundaryRule {
    std::optional<int> tag;
    FacetPredicate predicate;
    FacetKind kind = FacetKind::dirichlet;

    static BoundaryRule by_tag(int tag, FacetKind kind) { return {tag, {}, kind}; }
    static BoundaryRule where(FacetPredicate p, FacetKind kind) { return {std::nullopt, std::move(p), kind}; }
    static BoundaryRule everywhere(FacetKind kind)
    {
        return {std::nullopt, [](const Vec&) { return true; }, kind};
    }
};

/// Throws ConfigError listing the centroid of the first uncovered facet.
Mesh classify_facets(const Mesh& mesh, const std::vector<BoundaryRule>& rules);

/// Predicate for facets lying on the plane x_axis = value.
FacetPredicate on_plane(int axis, double value, double tol = 1e-10);

// -- generators ---------------------------------------------------------------

/// n x n squares on (0,1)^2, each split along the lower-left to upper-right
/// diagonal. Boundary facets are classified with `rules` (default: all Dirichlet).
Mesh unit_square_structured(int n, const std::vector<BoundaryRule>& rules = {});

/// Kuhn split of an nx x ny x nz box grid into 6 tetrahedra per cube.
Mesh box_structured_tet(int nx, int ny, int nz, const std::array<double, 3>& extents,
                        const std::vector<BoundaryRule>& rules = {});

/// Unit square with a circular hole of radius `radius` centred at (0.5, 0.5),
/// meshed as a mapped annulus. `n_side` segments per square side,
/// `n_radial` layers between hole and boundary. Boundary tags: 1 bottom,
/// 2 top, 3 left/right, 4 hole.
Mesh perforated_square(int n_side, int n_radial, double radius = 0.25);

/// Disk made of concentric regions. `radii` are increasing outer radii of
/// regions 1..J counted from the centre; `layers` gives radial layers per
/// region. Outer boundary tags: 1 for the arc of length `arc_length`
/// centred at -y (posterior), 2 for the arc centred at +y (anterior), 3 else.
Mesh concentric_disk(const std::vector<double>& radii, const std::vector<int>& layers,
                     int n_theta, double arc_length);

// -- text format ----------------------------------------------------------------

/// Reads the `dgmesh 1 <d>` format. Boundary tags from the file are kept;
/// classification is left to classify_facets.
Mesh read_mesh(const std::string& path);
Mesh read_mesh_stream(std::istream& in);
void write_mesh(const Mesh& mesh, const std::string& path);
void write_mesh_stream(const Mesh& mesh, std::ostream& out);

} // namespace zener
