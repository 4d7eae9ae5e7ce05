#include "zener/output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace zener {

std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_sig4(double value)
{
    if (!std::isfinite(value))
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    return buf;
}

std::string format_full(double value)
{
    if (!std::isfinite(value))
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), path_(path), columns_(header.size())
{
    if (!out_)
        throw std::runtime_error("cannot open " + path + " for writing");
    row_ = header;
    end_row();
}

CsvWriter& CsvWriter::add(const std::string& cell)
{
    row_.push_back(cell);
    return *this;
}

CsvWriter& CsvWriter::add(double value) { return add(format_full(value)); }

CsvWriter& CsvWriter::add(long long value) { return add(std::to_string(value)); }

void CsvWriter::end_row()
{
    if (row_.size() != columns_)
        throw std::logic_error("CSV row has " + std::to_string(row_.size()) + " cells, expected "
                               + std::to_string(columns_));
    for (std::size_t i = 0; i < row_.size(); ++i)
        out_ << (i ? "," : "") << csv_escape(row_[i]);
    out_ << "\r\n";
    out_.flush();
    row_.clear();
    if (!out_)
        throw std::runtime_error("write to " + path_ + " failed");
}

void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<CellScalar>& scalars,
               const std::vector<CellVector>& vectors)
{
    const std::size_t nc = mesh.num_cells();
    for (const auto& s : scalars)
        if (s.values.size() != nc)
            throw std::invalid_argument("cell field " + s.name + " has the wrong length");
    for (const auto& v : vectors)
        if (v.values.size() != nc)
            throw std::invalid_argument("cell field " + v.name + " has the wrong length");

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(10);
    out << "# vtk DataFile Version 3.0\nzener-dg\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_vertices() << " double\n";
    for (const Vec& x : mesh.vertices())
        out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    const int nv = mesh.dim() + 1;
    out << "CELLS " << nc << ' ' << nc * static_cast<std::size_t>(nv + 1) << '\n';
    for (std::size_t c = 0; c < nc; ++c) {
        out << nv;
        for (int v : mesh.cell_vertices(c))
            out << ' ' << v;
        out << '\n';
    }
    out << "CELL_TYPES " << nc << '\n';
    const int type = mesh.dim() == 2 ? 5 : 10;
    for (std::size_t c = 0; c < nc; ++c)
        out << type << '\n';

    out << "CELL_DATA " << nc << '\n';
    out << "SCALARS region int 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < nc; ++c)
        out << mesh.region(c) << '\n';
    for (const auto& s : scalars) {
        out << "SCALARS " << s.name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : s.values)
            out << v << '\n';
    }
    for (const auto& v : vectors) {
        out << "VECTORS " << v.name << " double\n";
        for (const Vec& x : v.values)
            out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    }
    if (!out)
        throw std::runtime_error("write to " + path + " failed");
}

} // namespace zener
