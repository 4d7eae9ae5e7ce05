#include "zener/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace zener {

namespace {

std::vector<BoundaryRule> default_rules(const std::vector<BoundaryRule>& rules)
{
    if (!rules.empty())
        return rules;
    return {BoundaryRule::everywhere(FacetKind::dirichlet)};
}

} // namespace

Mesh unit_square_structured(int n, const std::vector<BoundaryRule>& rules)
{
    if (n < 1)
        throw std::invalid_argument("unit_square_structured: n must be positive");
    const double h = 1.0 / n;
    std::vector<Vec> verts;
    verts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.emplace_back(i * h, j * h, 0.0);

    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 4>> cells;
    cells.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
            cells.push_back({v00, v10, v11, -1});
            cells.push_back({v00, v11, v01, -1});
        }
    }
    std::vector<int> regions(cells.size(), 1);
    Mesh mesh(2, std::move(verts), std::move(cells), std::move(regions));
    return classify_facets(mesh, default_rules(rules));
}

Mesh box_structured_tet(int nx, int ny, int nz, const std::array<double, 3>& extents,
                        const std::vector<BoundaryRule>& rules)
{
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("box_structured_tet: cell counts must be positive");
    if (extents[0] <= 0.0 || extents[1] <= 0.0 || extents[2] <= 0.0)
        throw std::invalid_argument("box_structured_tet: extents must be positive");

    std::vector<Vec> verts;
    verts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1) * (nz + 1)));
    for (int k = 0; k <= nz; ++k)
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                verts.emplace_back(extents[0] * i / nx, extents[1] * j / ny, extents[2] * k / nz);
    auto id = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };

    // Kuhn split: one tet per permutation of the axes, all sharing the main diagonal.
    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

    std::vector<std::array<int, 4>> cells;
    cells.reserve(static_cast<std::size_t>(6 * nx * ny * nz));
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                for (const auto& p : perms) {
                    std::array<int, 3> ijk{i, j, k};
                    std::array<int, 4> tet{};
                    tet[0] = id(ijk[0], ijk[1], ijk[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++ijk[p[s]];
                        tet[s + 1] = id(ijk[0], ijk[1], ijk[2]);
                    }
                    cells.push_back(tet);
                }
            }
        }
    }
    std::vector<int> regions(cells.size(), 1);
    Mesh mesh(3, std::move(verts), std::move(cells), std::move(regions));
    return classify_facets(mesh, default_rules(rules));
}

Mesh perforated_square(int n_side, int n_radial, double radius)
{
    if (n_side < 1 || n_radial < 1)
        throw std::invalid_argument("perforated_square: counts must be positive");
    if (!(radius > 0.0 && radius < 0.5))
        throw std::invalid_argument("perforated_square: radius must lie in (0, 0.5)");

    // Outer ring walks the square boundary counter-clockwise from (0, 0).
    const int n_theta = 4 * n_side;
    std::vector<Vec> outer;
    outer.reserve(static_cast<std::size_t>(n_theta));
    const std::array<Vec, 4> corners{Vec(0, 0, 0), Vec(1, 0, 0), Vec(1, 1, 0), Vec(0, 1, 0)};
    for (int s = 0; s < 4; ++s)
        for (int i = 0; i < n_side; ++i)
            outer.push_back(corners[s] + (corners[(s + 1) % 4] - corners[s]) * (double(i) / n_side));

    const Vec centre(0.5, 0.5, 0.0);
    std::vector<Vec> verts;
    verts.reserve(static_cast<std::size_t>(n_theta * (n_radial + 1)));
    for (int l = 0; l <= n_radial; ++l) {
        for (int j = 0; j < n_theta; ++j) {
            const Vec d = outer[j] - centre;
            const double theta = std::atan2(d.y(), d.x());
            const Vec inner = centre + radius * Vec(std::cos(theta), std::sin(theta), 0.0);
            verts.push_back(inner + (double(l) / n_radial) * (outer[j] - inner));
        }
    }
    auto id = [n_theta](int l, int j) { return l * n_theta + (j % n_theta); };

    std::vector<std::array<int, 4>> cells;
    for (int l = 0; l < n_radial; ++l) {
        for (int j = 0; j < n_theta; ++j) {
            const int a = id(l, j), b = id(l, j + 1), c = id(l + 1, j + 1), d = id(l + 1, j);
            cells.push_back({a, b, c, -1});
            cells.push_back({a, c, d, -1});
        }
    }

    std::vector<Mesh::BoundaryTag> tags;
    for (int j = 0; j < n_theta; ++j) {
        tags.push_back({{id(0, j), id(0, j + 1), -1}, 4});
        const Vec mid = 0.5 * (verts[id(n_radial, j)] + verts[id(n_radial, j + 1)]);
        int tag = 3;
        if (std::abs(mid.y()) < 1e-12)
            tag = 1;
        else if (std::abs(mid.y() - 1.0) < 1e-12)
            tag = 2;
        tags.push_back({{id(n_radial, j), id(n_radial, j + 1), -1}, tag});
    }
    std::vector<int> regions(cells.size(), 1);
    return Mesh(2, std::move(verts), std::move(cells), std::move(regions), tags);
}

Mesh concentric_disk(const std::vector<double>& radii, const std::vector<int>& layers, int n_theta,
                     double arc_length)
{
    if (radii.empty() || radii.size() != layers.size())
        throw std::invalid_argument("concentric_disk: one layer count per radius required");
    if (n_theta < 3)
        throw std::invalid_argument("concentric_disk: n_theta must be at least 3");

    std::vector<double> ring_r;
    std::vector<int> ring_region; // region of the layer ending at this ring
    double r0 = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
        if (!(radii[j] > r0) || layers[j] < 1)
            throw std::invalid_argument("concentric_disk: radii must increase, layers be positive");
        for (int l = 1; l <= layers[j]; ++l) {
            ring_r.push_back(r0 + (radii[j] - r0) * l / layers[j]);
            ring_region.push_back(static_cast<int>(j) + 1);
        }
        r0 = radii[j];
    }

    std::vector<Vec> verts{Vec::Zero()};
    for (double r : ring_r)
        for (int i = 0; i < n_theta; ++i) {
            const double t = 2.0 * std::numbers::pi * i / n_theta;
            verts.emplace_back(r * std::cos(t), r * std::sin(t), 0.0);
        }
    auto id = [n_theta](int ring, int i) { return 1 + ring * n_theta + (i % n_theta); };

    std::vector<std::array<int, 4>> cells;
    std::vector<int> regions;
    for (int i = 0; i < n_theta; ++i) {
        cells.push_back({0, id(0, i), id(0, i + 1), -1});
        regions.push_back(ring_region[0]);
    }
    for (std::size_t m = 0; m + 1 < ring_r.size(); ++m) {
        const int ring = static_cast<int>(m);
        for (int i = 0; i < n_theta; ++i) {
            const int a = id(ring, i), b = id(ring, i + 1), c = id(ring + 1, i + 1), d = id(ring + 1, i);
            cells.push_back({a, d, c, -1});
            cells.push_back({a, c, b, -1});
            regions.push_back(ring_region[m + 1]);
            regions.push_back(ring_region[m + 1]);
        }
    }

    const double outer_r = ring_r.back();
    const double half_width = 0.5 * arc_length / outer_r;
    std::vector<Mesh::BoundaryTag> tags;
    const int last = static_cast<int>(ring_r.size()) - 1;
    for (int i = 0; i < n_theta; ++i) {
        const Vec mid = 0.5 * (verts[id(last, i)] + verts[id(last, i + 1)]);
        const double theta = std::atan2(mid.y(), mid.x());
        int tag = 3;
        if (std::abs(theta - 0.5 * std::numbers::pi) <= half_width)
            tag = 2;
        else if (std::abs(theta + 0.5 * std::numbers::pi) <= half_width)
            tag = 1;
        tags.push_back({{id(last, i), id(last, i + 1), -1}, tag});
    }
    return Mesh(2, std::move(verts), std::move(cells), std::move(regions), tags);
}

} // namespace zener
