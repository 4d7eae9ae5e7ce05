#pragma once

#include "zener/mesh.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace zener {

/// Comma-separated table (RFC 4180 quoting). Throws std::runtime_error when
/// the file cannot be written.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    /// Starts a new row; cells are appended with add().
    CsvWriter& add(const std::string& cell);
    CsvWriter& add(double value);
    CsvWriter& add(long long value);
    CsvWriter& add_int(long long value) { return add(value); }
    void end_row();

    std::size_t columns() const { return columns_; }

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
    std::vector<std::string> row_;
};

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_escape(const std::string& field);

/// Scientific notation with four significant digits, e.g. 1.234e-05.
std::string format_sig4(double value);
/// Round-trip precision.
std::string format_full(double value);

struct CellScalar {
    std::string name;
    std::vector<double> values;
};

struct CellVector {
    std::string name;
    std::vector<Vec> values;
};

/// Legacy ASCII VTK unstructured grid with cell data. Throws
/// std::runtime_error on I/O failure and std::invalid_argument when a field
/// does not have one value per cell.
void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<CellScalar>& scalars,
               const std::vector<CellVector>& vectors = {});

} // namespace zener
