#include "zener/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace zener {

const char* to_string(FacetKind kind)
{
    switch (kind) {
    case FacetKind::interior: return "interior";
    case FacetKind::dirichlet: return "dirichlet";
    case FacetKind::neumann: return "neumann";
    case FacetKind::unclassified: return "unclassified";
    }
    return "?";
}

namespace {

using FacetKey = std::array<int, 3>;

FacetKey make_key(std::span<const int> verts)
{
    FacetKey key{-1, -1, -1};
    std::copy(verts.begin(), verts.end(), key.begin());
    std::sort(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(verts.size()));
    return key;
}

double max_edge(std::span<const Vec* const> pts)
{
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, (*pts[i] - *pts[j]).norm());
    return d;
}

} // namespace

Mesh::Mesh(int dim, std::vector<Vec> vertices, std::vector<std::array<int, 4>> cells,
           std::vector<int> regions, const std::vector<BoundaryTag>& boundary_tags)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)), regions_(std::move(regions))
{
    if (dim_ != 2 && dim_ != 3)
        throw std::invalid_argument("mesh dimension must be 2 or 3");
    if (regions_.size() != cells_.size())
        throw std::invalid_argument("one region tag per cell required");
    const auto nv = static_cast<int>(vertices_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (int i = 0; i <= dim_; ++i) {
            const int v = cells_[c][i];
            if (v < 0 || v >= nv)
                throw std::invalid_argument("cell " + std::to_string(c) + " references vertex "
                                            + std::to_string(v) + " out of range");
        }
        if (dim_ == 2)
            cells_[c][3] = -1;
    }
    if (dim_ == 2)
        for (Vec& v : vertices_)
            v.z() = 0.0;
    build_geometry();
    build_facets(boundary_tags);
}

void Mesh::build_geometry()
{
    geometry_.resize(cells_.size());
    const double factorial = dim_ == 2 ? 2.0 : 6.0;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        auto& cell = cells_[c];
        auto jac = [&] {
            Mat3 J = Mat3::Identity();
            for (int i = 0; i < dim_; ++i)
                J.col(i) = vertices_[cell[i + 1]] - vertices_[cell[0]];
            return J;
        };
        Mat3 J = jac();
        double det = J.determinant();
        if (det < 0.0) {
            // canonical reordering: swap the last two vertices
            std::swap(cell[dim_ - 1], cell[dim_]);
            J = jac();
            det = J.determinant();
        }
        if (!(det > 0.0))
            throw std::invalid_argument("degenerate cell " + std::to_string(c));

        CellGeometry& g = geometry_[c];
        g.origin = vertices_[cell[0]];
        g.jacobian = J;
        g.inverse = J.inverse();
        g.det = det;
        g.volume = det / factorial;
        std::array<const Vec*, 4> pts{};
        g.centroid.setZero();
        for (int i = 0; i <= dim_; ++i) {
            pts[i] = &vertices_[cell[i]];
            g.centroid += vertices_[cell[i]];
        }
        g.centroid /= (dim_ + 1);
        g.diameter = max_edge({pts.data(), static_cast<std::size_t>(dim_ + 1)});
    }
}

void Mesh::build_facets(const std::vector<BoundaryTag>& boundary_tags)
{
    std::map<FacetKey, int> lookup;
    cell_facets_.assign(cells_.size(), {-1, -1, -1, -1});
    facets_.clear();

    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (int i = 0; i <= dim_; ++i) {
            std::array<int, 3> local{};
            int m = 0;
            for (int j = 0; j <= dim_; ++j)
                if (j != i)
                    local[m++] = cells_[c][j];
            const FacetKey key = make_key({local.data(), static_cast<std::size_t>(dim_)});
            auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(facets_.size()));
            if (inserted) {
                Facet f;
                f.vertices = key;
                f.owners = {static_cast<int>(c), -1};
                facets_.push_back(f);
            } else {
                Facet& f = facets_[it->second];
                if (f.owners[1] >= 0)
                    throw std::invalid_argument("non-manifold facet shared by more than two cells (cell "
                                                + std::to_string(c) + ")");
                f.owners[1] = static_cast<int>(c);
            }
            cell_facets_[c][i] = it->second;
        }
    }

    for (Facet& f : facets_) {
        const Vec& a = vertices_[f.vertices[0]];
        const Vec& b = vertices_[f.vertices[1]];
        Vec n;
        if (dim_ == 2) {
            const Vec t = b - a;
            f.measure = t.norm();
            f.diameter = f.measure;
            n = Vec(t.y(), -t.x(), 0.0);
            f.centroid = 0.5 * (a + b);
        } else {
            const Vec& p = vertices_[f.vertices[2]];
            n = (b - a).cross(p - a);
            f.measure = 0.5 * n.norm();
            std::array<const Vec*, 3> pts{&a, &b, &p};
            f.diameter = max_edge(pts);
            f.centroid = (a + b + p) / 3.0;
        }
        n.normalize();
        if (n.dot(f.centroid - geometry_[f.owners[0]].centroid) < 0.0)
            n = -n;
        f.normal = n;
        f.kind = f.is_boundary() ? FacetKind::unclassified : FacetKind::interior;
    }

    for (const BoundaryTag& bt : boundary_tags) {
        const FacetKey key = make_key({bt.vertices.data(), static_cast<std::size_t>(dim_)});
        auto it = lookup.find(key);
        if (it == lookup.end() || !facets_[it->second].is_boundary())
            throw std::invalid_argument("boundary tag " + std::to_string(bt.tag)
                                        + " does not match a boundary facet");
        facets_[it->second].tag = bt.tag;
    }
}

double Mesh::mesh_size() const
{
    double h = 0.0;
    for (const auto& g : geometry_)
        h = std::max(h, g.diameter);
    return h;
}

double Mesh::total_volume() const
{
    double v = 0.0;
    for (const auto& g : geometry_)
        v += g.volume;
    return v;
}

std::vector<int> Mesh::face_term_facets() const
{
    std::vector<int> out;
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        const FacetKind k = facets_[f].kind;
        if (k == FacetKind::interior || k == FacetKind::neumann)
            out.push_back(static_cast<int>(f));
    }
    return out;
}

std::size_t Mesh::count(FacetKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(facets_.begin(), facets_.end(), [kind](const Facet& f) { return f.kind == kind; }));
}

int Mesh::locate(const Vec& x, double tol) const
{
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const Vec xi = geometry_[c].to_reference(x);
        double sum = 0.0;
        bool inside = true;
        for (int i = 0; i < dim_; ++i) {
            inside = inside && xi[i] >= -tol;
            sum += xi[i];
        }
        if (inside && sum <= 1.0 + tol)
            return static_cast<int>(c);
    }
    return -1;
}

Mesh Mesh::with_kinds(const std::vector<FacetKind>& kinds) const
{
    if (kinds.size() != facets_.size())
        throw std::invalid_argument("one facet kind per facet required");
    Mesh out = *this;
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        const bool boundary = facets_[f].is_boundary();
        if (boundary == (kinds[f] == FacetKind::interior))
            throw std::invalid_argument("facet " + std::to_string(f) + " cannot be marked "
                                        + to_string(kinds[f]));
        out.facets_[f].kind = kinds[f];
    }
    return out;
}

Mesh classify_facets(const Mesh& mesh, const std::vector<BoundaryRule>& rules)
{
    std::vector<FacetKind> kinds(mesh.num_facets(), FacetKind::interior);
    for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
        const Facet& facet = mesh.facet(f);
        if (!facet.is_boundary())
            continue;
        std::optional<FacetKind> kind;
        for (const BoundaryRule& r : rules) {
            if (r.tag && facet.tag != 0 && *r.tag == facet.tag) {
                kind = r.kind;
                break;
            }
        }
        if (!kind) {
            for (const BoundaryRule& r : rules) {
                if (!r.tag && r.predicate && r.predicate(facet.centroid)) {
                    kind = r.kind;
                    break;
                }
            }
        }
        if (!kind || *kind == FacetKind::interior || *kind == FacetKind::unclassified) {
            std::ostringstream os;
            os << "boundary facet " << f << " with centroid (" << facet.centroid.x() << ", "
               << facet.centroid.y();
            if (mesh.dim() == 3)
                os << ", " << facet.centroid.z();
            os << ") is not covered by any boundary rule";
            throw ConfigError(os.str());
        }
        kinds[f] = *kind;
    }
    return mesh.with_kinds(kinds);
}

FacetPredicate on_plane(int axis, double value, double tol)
{
    return [=](const Vec& c) { return std::abs(c[axis] - value) <= tol; };
}

} // namespace zener
