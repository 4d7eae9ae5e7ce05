#include "zener/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace zener {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank line; '#' starts a comment.
    std::istringstream next(const char* what)
    {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (auto pos = line.find('#'); pos != std::string::npos)
                line.erase(pos);
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                return std::istringstream(line);
        }
        throw ParseError(std::string("unexpected end of file while reading ") + what, line_no_ + 1);
    }

    int line() const { return line_no_; }

private:
    std::istream& in_;
    int line_no_ = 0;
};

template <typename T>
T read_value(std::istringstream& is, const LineReader& r, const char* what)
{
    T v{};
    if (!(is >> v))
        throw ParseError(std::string("expected ") + what, r.line());
    return v;
}

void expect_end(std::istringstream& is, const LineReader& r)
{
    std::string extra;
    if (is >> extra)
        throw ParseError("unexpected trailing token '" + extra + "'", r.line());
}

} // namespace

Mesh read_mesh_stream(std::istream& in)
{
    LineReader reader(in);

    auto header = reader.next("header");
    std::string magic;
    int version = 0, dim = 0;
    if (!(header >> magic >> version >> dim) || magic != "dgmesh" || version != 1 || (dim != 2 && dim != 3))
        throw ParseError("malformed header, expected 'dgmesh 1 <d>' with d in {2,3}", reader.line());
    expect_end(header, reader);

    auto counts = reader.next("counts");
    long nv = -1, nc = -1, nbf = -1;
    if (!(counts >> nv >> nc >> nbf) || nv < 0 || nc < 0 || nbf < 0)
        throw ParseError("malformed counts line, expected '<nv> <nc> <nbf>'", reader.line());
    expect_end(counts, reader);

    std::vector<Vec> verts(static_cast<std::size_t>(nv), Vec::Zero());
    for (long v = 0; v < nv; ++v) {
        auto ls = reader.next("vertex");
        for (int i = 0; i < dim; ++i)
            verts[v][i] = read_value<double>(ls, reader, "vertex coordinate");
        expect_end(ls, reader);
    }

    std::vector<std::array<int, 4>> cells(static_cast<std::size_t>(nc), {-1, -1, -1, -1});
    std::vector<int> regions(static_cast<std::size_t>(nc), 0);
    std::map<std::array<int, 3>, int> facet_owners;
    for (long c = 0; c < nc; ++c) {
        auto ls = reader.next("cell");
        for (int i = 0; i <= dim; ++i) {
            const long v = read_value<long>(ls, reader, "cell vertex index");
            if (v < 0 || v >= nv)
                throw ParseError("cell vertex index " + std::to_string(v) + " out of range", reader.line());
            cells[c][i] = static_cast<int>(v);
        }
        regions[c] = read_value<int>(ls, reader, "cell region tag");
        expect_end(ls, reader);

        for (int i = 0; i <= dim; ++i) {
            std::array<int, 3> key{-1, -1, -1};
            int m = 0;
            for (int j = 0; j <= dim; ++j)
                if (j != i)
                    key[m++] = cells[c][j];
            std::sort(key.begin(), key.begin() + dim);
            if (key[0] == key[1] || (dim == 3 && key[1] == key[2]))
                throw ParseError("cell repeats a vertex", reader.line());
            if (++facet_owners[key] > 2)
                throw ParseError("non-manifold facet shared by more than two cells", reader.line());
        }
    }

    std::vector<Mesh::BoundaryTag> tags;
    tags.reserve(static_cast<std::size_t>(nbf));
    for (long b = 0; b < nbf; ++b) {
        auto ls = reader.next("boundary facet");
        Mesh::BoundaryTag bt;
        for (int i = 0; i < dim; ++i) {
            const long v = read_value<long>(ls, reader, "boundary facet vertex index");
            if (v < 0 || v >= nv)
                throw ParseError("boundary facet vertex index " + std::to_string(v) + " out of range",
                                 reader.line());
            bt.vertices[i] = static_cast<int>(v);
        }
        bt.tag = read_value<int>(ls, reader, "boundary tag");
        expect_end(ls, reader);

        std::array<int, 3> key = bt.vertices;
        std::sort(key.begin(), key.begin() + dim);
        auto it = facet_owners.find(key);
        if (it == facet_owners.end() || it->second != 1)
            throw ParseError("listed boundary facet is not a boundary facet of the mesh", reader.line());
        tags.push_back(bt);
    }

    try {
        return Mesh(dim, std::move(verts), std::move(cells), std::move(regions), tags);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), reader.line());
    }
}

Mesh read_mesh(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open mesh file '" + path + "'");
    return read_mesh_stream(in);
}

void write_mesh_stream(const Mesh& mesh, std::ostream& out)
{
    const int d = mesh.dim();
    std::size_t nbf = 0;
    for (const Facet& f : mesh.facets())
        nbf += f.is_boundary() ? 1 : 0;

    out << "dgmesh 1 " << d << '\n';
    out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << nbf << '\n';
    out << std::setprecision(17);
    for (const Vec& v : mesh.vertices()) {
        for (int i = 0; i < d; ++i)
            out << (i ? " " : "") << v[i];
        out << '\n';
    }
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        for (int v : mesh.cell_vertices(c))
            out << v << ' ';
        out << mesh.region(c) << '\n';
    }
    for (const Facet& f : mesh.facets()) {
        if (!f.is_boundary())
            continue;
        for (int i = 0; i < d; ++i)
            out << f.vertices[i] << ' ';
        out << f.tag << '\n';
    }
}

void write_mesh(const Mesh& mesh, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write mesh file '" + path + "'");
    write_mesh_stream(mesh, out);
    if (!out)
        throw std::runtime_error("error while writing mesh file '" + path + "'");
}

} // namespace zener
