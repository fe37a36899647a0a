#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>

namespace bgi {

// Row 0 is the top (north) row, matching the ASCII grid layout.
template <typename Scalar>
using Raster = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Mask = Raster<bool>;

struct AsciiGridHeader {
    Eigen::Index ncols = 0;
    Eigen::Index nrows = 0;
    double cellsize = 1.0;
    double nodata_value = -9999.0;
};

template <typename Scalar>
struct AsciiGrid {
    AsciiGridHeader header;
    Raster<Scalar> values;
};

// Reads an ESRI-style ASCII grid. ncols, nrows and cellsize are required;
// xllcorner/yllcorner (or the *center variants) are accepted and ignored.
[[nodiscard]] AsciiGrid<double> read_ascii_grid(std::filesystem::path const& path);

// Integer-valued grid; fails on non-integral cells.
[[nodiscard]] AsciiGrid<int> read_ascii_grid_int(std::filesystem::path const& path);

enum class GridPrecision {
    shortest,      // round-trippable shortest representation
    fixed_6,       // six decimal places (depth rasters)
};

void write_ascii_grid(std::filesystem::path const& path, Raster<double> const& values, double cellsize,
                      double nodata_value = -9999.0, GridPrecision precision = GridPrecision::shortest);
void write_ascii_grid(std::filesystem::path const& path, Raster<int> const& values, double cellsize,
                      double nodata_value = -9999.0);

// Shortest decimal form that reads back to the same double.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] std::string format_fixed(double value, int decimals);

} // namespace bgi
