#include "zener/mesh.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <set>
#include <sstream>

using namespace zener;

namespace {

std::size_t boundary_count(const Mesh& m)
{
    std::size_t n = 0;
    for (const Facet& f : m.facets())
        n += f.is_boundary() ? 1 : 0;
    return n;
}

double vertex_set_diameter(const Mesh& m, const Facet& f)
{
    double d = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i + 1; j < m.dim(); ++j)
            d = std::max(d, (m.vertex(f.vertices[i]) - m.vertex(f.vertices[j])).norm());
    return d;
}

} // namespace

TEST(UnitSquare, CellCountAndMeshSize)
{
    const Mesh m = unit_square_structured(2);
    EXPECT_EQ(m.num_cells(), 8u);
    EXPECT_NEAR(m.mesh_size(), 0.707, 5e-4);
    EXPECT_NEAR(unit_square_structured(64).mesh_size(), 0.0221, 5e-5);
}

TEST(UnitSquare, SmallestSplit)
{
    const Mesh m = unit_square_structured(1);
    EXPECT_EQ(m.num_cells(), 2u);
    EXPECT_EQ(m.num_vertices(), 4u);
    EXPECT_EQ(m.num_facets(), 5u);
    EXPECT_EQ(boundary_count(m), 4u);
}

TEST(UnitSquare, InteriorFacetCountForAllDirichlet)
{
    const Mesh m = unit_square_structured(2);
    EXPECT_EQ(m.count(FacetKind::interior), 8u);
    EXPECT_EQ(m.count(FacetKind::dirichlet), 8u);
    EXPECT_EQ(m.face_term_facets().size(), 8u);
}

TEST(UnitSquare, EulerCounts)
{
    for (int n : {1, 3, 5}) {
        const Mesh m = unit_square_structured(n);
        // edges: n(n+1) horizontal + n(n+1) vertical + n^2 diagonals
        EXPECT_EQ(m.num_facets(), static_cast<std::size_t>(2 * n * (n + 1) + n * n));
        EXPECT_EQ(boundary_count(m), static_cast<std::size_t>(4 * n));
        EXPECT_EQ(m.num_vertices(), static_cast<std::size_t>((n + 1) * (n + 1)));
    }
}

TEST(UnitSquare, RejectsZero) { EXPECT_THROW(unit_square_structured(0), std::invalid_argument); }

TEST(Box, KuhnCounts)
{
    EXPECT_EQ(box_structured_tet(1, 1, 1, {1, 1, 1}).num_cells(), 6u);
    EXPECT_EQ(box_structured_tet(24, 12, 12, {1, 0.5, 0.5}).num_cells(), 20736u);
    EXPECT_THROW(box_structured_tet(0, 1, 1, {1, 1, 1}), std::invalid_argument);
}

TEST(Box, SignedVolumesPositive)
{
    const Mesh m = box_structured_tet(2, 1, 1, {1, 1, 1});
    ASSERT_EQ(m.num_cells(), 12u);
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const auto v = m.cell_vertices(c);
        const Vec a = m.vertex(v[1]) - m.vertex(v[0]);
        const Vec b = m.vertex(v[2]) - m.vertex(v[0]);
        const Vec d = m.vertex(v[3]) - m.vertex(v[0]);
        EXPECT_GT(a.cross(b).dot(d) / 6.0, 0.0) << "cell " << c;
    }
}

TEST(Box, FacetCounts)
{
    // a Kuhn-split box: every boundary square carries two triangles
    const int nx = 3, ny = 2, nz = 2;
    const Mesh m = box_structured_tet(nx, ny, nz, {1.5, 1.0, 1.0});
    EXPECT_EQ(boundary_count(m), static_cast<std::size_t>(4 * (nx * ny + ny * nz + nx * nz)));
    // 4 faces per tet, interior facets counted twice
    EXPECT_EQ(4 * m.num_cells(), 2 * m.num_facets() - boundary_count(m));
}

TEST(MeshGeometry, VolumesSumToDomain)
{
    EXPECT_NEAR(unit_square_structured(7).total_volume(), 1.0, 1e-12);
    EXPECT_NEAR(box_structured_tet(3, 2, 2, {1, 0.5, 0.5}).total_volume(), 0.25, 1e-12 * 0.25);
    const double r = 0.25;
    const Mesh p = perforated_square(8, 4, r);
    // the hole is a polygon inscribed in the circle; fan it from the centre
    double hole = 0.0;
    for (const Facet& f : p.facets())
        if (f.tag == 4) {
            const Vec a = p.vertex(f.vertices[0]) - Vec(0.5, 0.5, 0.0);
            const Vec b = p.vertex(f.vertices[1]) - Vec(0.5, 0.5, 0.0);
            EXPECT_NEAR(a.norm(), r, 1e-14);
            hole += 0.5 * std::abs(a.cross(b).z());
        }
    EXPECT_GT(hole, 0.9 * M_PI * r * r);
    EXPECT_NEAR(p.total_volume(), 1.0 - hole, 1e-12);
}

TEST(MeshGeometry, NormalsUnitAndFacetDiameters)
{
    for (const Mesh& m : {unit_square_structured(3), box_structured_tet(2, 2, 1, {1, 1, 0.5})}) {
        for (const Facet& f : m.facets()) {
            EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
            EXPECT_GT(f.diameter, 0.0);
            EXPECT_NEAR(f.diameter, vertex_set_diameter(m, f), 1e-15);
            // the normal points away from the first owner
            EXPECT_GT((f.centroid - m.geometry(static_cast<std::size_t>(f.owners[0])).centroid).dot(f.normal), 0.0);
            if (!f.is_boundary()) {
                EXPECT_LT((f.centroid - m.geometry(static_cast<std::size_t>(f.owners[1])).centroid).dot(f.normal),
                          0.0);
            }
        }
    }
}

TEST(MeshGeometry, InteriorNormalsAntiparallel)
{
    // outward normal of the second owner, rebuilt from its geometry, is -normal
    const Mesh m = box_structured_tet(2, 1, 1, {1, 1, 1});
    for (std::size_t fi = 0; fi < m.num_facets(); ++fi) {
        const Facet& f = m.facet(fi);
        if (f.is_boundary())
            continue;
        const Vec a = m.vertex(f.vertices[1]) - m.vertex(f.vertices[0]);
        const Vec b = m.vertex(f.vertices[2]) - m.vertex(f.vertices[0]);
        Vec n = a.cross(b).normalized();
        const Vec inward1 = m.geometry(static_cast<std::size_t>(f.owners[1])).centroid - f.centroid;
        if (n.dot(inward1) > 0.0)
            n = -n; // outward from owner 1
        EXPECT_NEAR((n + f.normal).norm(), 0.0, 1e-14);
    }
}

TEST(Classify, BottomDirichletRestNeumann)
{
    const Mesh m = unit_square_structured(
        3, {BoundaryRule::where(on_plane(1, 0.0), FacetKind::dirichlet), BoundaryRule::everywhere(FacetKind::neumann)});
    for (const Facet& f : m.facets()) {
        if (!f.is_boundary()) {
            EXPECT_EQ(f.kind, FacetKind::interior);
            continue;
        }
        if (std::abs(f.centroid.y()) < 1e-12)
            EXPECT_EQ(f.kind, FacetKind::dirichlet);
        else
            EXPECT_EQ(f.kind, FacetKind::neumann);
    }
    EXPECT_EQ(m.count(FacetKind::dirichlet), 3u);
    EXPECT_EQ(m.face_term_facets().size(), m.count(FacetKind::interior) + 9u);
}

TEST(Classify, UncoveredFacetIsConfigError)
{
    const Mesh m = unit_square_structured(2);
    try {
        classify_facets(m, {BoundaryRule::where(on_plane(0, 0.0), FacetKind::dirichlet)});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("centroid"), std::string::npos) << e.what();
    }
}

TEST(Classify, TagsTakePrecedence)
{
    const Mesh p = perforated_square(4, 2, 0.25);
    const Mesh m = classify_facets(p, {BoundaryRule::by_tag(4, FacetKind::dirichlet),
                                       BoundaryRule::everywhere(FacetKind::neumann)});
    for (const Facet& f : m.facets()) {
        if (f.is_boundary()) {
            EXPECT_EQ(f.kind, f.tag == 4 ? FacetKind::dirichlet : FacetKind::neumann);
        }
    }
}

TEST(Locate, FindsContainingCell)
{
    const Mesh m = unit_square_structured(4);
    const Vec x(0.3, 0.6, 0.0);
    const int c = m.locate(x);
    ASSERT_GE(c, 0);
    const Vec xi = m.geometry(static_cast<std::size_t>(c)).to_reference(x);
    EXPECT_GE(xi.x(), -1e-12);
    EXPECT_GE(xi.y(), -1e-12);
    EXPECT_LE(xi.x() + xi.y(), 1.0 + 1e-12);
    EXPECT_EQ(m.locate(Vec(1.5, 0.5, 0.0)), -1);
}

TEST(MeshIO, ReadsTwoTriangleExample)
{
    std::istringstream in("dgmesh 1 2\n4 2 4\n0 0\n1 0\n1 1\n0 1\n0 1 2 1\n0 2 3 1\n0 1 10\n1 2 11\n2 3 12\n3 0 13\n");
    const Mesh m = read_mesh_stream(in);
    EXPECT_EQ(m.num_cells(), 2u);
    EXPECT_EQ(m.count(FacetKind::interior), 1u);
    std::set<int> tags;
    for (const Facet& f : m.facets())
        if (f.is_boundary())
            tags.insert(f.tag);
    EXPECT_EQ(tags, (std::set<int>{10, 11, 12, 13}));
}

TEST(MeshIO, OutOfRangeCellIndexNamesLine)
{
    std::istringstream in("dgmesh 1 2\n4 2 0\n0 0\n1 0\n1 1\n0 1\n0 1 2 1\n0 2 7 1\n");
    try {
        read_mesh_stream(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 8);
    }
}

TEST(MeshIO, MalformedHeader)
{
    std::istringstream in("mesh 2\n");
    try {
        read_mesh_stream(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1);
    }
}

TEST(MeshIO, NonManifoldFacet)
{
    std::istringstream in("dgmesh 1 2\n5 3 0\n0 0\n1 0\n0 1\n0 -1\n1 1\n0 1 2 1\n0 1 3 1\n0 1 4 1\n");
    try {
        read_mesh_stream(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        // the third cell on facet (0, 1)
        EXPECT_EQ(e.line(), 10);
    }
}

TEST(MeshIO, RoundTrip)
{
    for (const Mesh& m : {perforated_square(4, 2, 0.25), box_structured_tet(2, 1, 1, {1, 0.5, 0.5})}) {
        std::stringstream buf;
        write_mesh_stream(m, buf);
        const Mesh r = read_mesh_stream(buf);
        ASSERT_EQ(r.num_cells(), m.num_cells());
        ASSERT_EQ(r.num_vertices(), m.num_vertices());
        ASSERT_EQ(r.num_facets(), m.num_facets());
        for (std::size_t v = 0; v < m.num_vertices(); ++v)
            EXPECT_EQ(r.vertex(v), m.vertex(v));
        for (std::size_t c = 0; c < m.num_cells(); ++c) {
            const auto a = m.cell_vertices(c), b = r.cell_vertices(c);
            EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
            EXPECT_EQ(r.region(c), m.region(c));
        }
        for (std::size_t f = 0; f < m.num_facets(); ++f) {
            EXPECT_EQ(r.facet(f).vertices, m.facet(f).vertices);
            EXPECT_EQ(r.facet(f).tag, m.facet(f).tag);
        }
    }
}

TEST(MeshIO, FileRoundTrip)
{
    const Mesh m = unit_square_structured(4);
    const std::string path = zener::testing::tmp_path("square4.dgmesh");
    write_mesh(m, path);
    const Mesh r = read_mesh(path);
    EXPECT_EQ(r.num_cells(), m.num_cells());
    EXPECT_THROW(read_mesh(path + ".missing"), std::runtime_error);
}

TEST(Generators, ConcentricDiskRegionsAndTags)
{
    const Mesh m = concentric_disk({0.0035, 0.006, 0.0065}, {4, 3, 1}, 32, 0.004);
    std::set<int> regions(m.regions().begin(), m.regions().end());
    EXPECT_EQ(regions, (std::set<int>{1, 2, 3}));
    std::set<int> tags;
    for (const Facet& f : m.facets())
        if (f.is_boundary()) {
            tags.insert(f.tag);
            EXPECT_NEAR(f.centroid.head<2>().norm(), 0.0065, 0.0065 * 0.01);
        }
    EXPECT_EQ(tags, (std::set<int>{1, 2, 3}));
}
