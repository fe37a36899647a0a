#include "bgi/raster.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bgi/errors.hpp"

namespace bgi {

std::string format_double(double value)
{
    char buffer[64];
    auto const [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string format_fixed(double value, int decimals)
{
    char buffer[64];
    auto const [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::fixed, decimals);
    return std::string(buffer, end);
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_number(std::string const& token, std::filesystem::path const& path)
{
    double value = 0.0;
    auto const* first = token.data();
    auto const* last = token.data() + token.size();
    if (!token.empty() && *first == '+') {
        ++first;
    }
    auto const [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(path.string() + ": '" + token + "' is not a number");
    }
    return value;
}

} // namespace

AsciiGrid<double> read_ascii_grid(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open ASCII grid " + path.string());
    }
    AsciiGrid<double> grid;
    bool have_cols = false;
    bool have_rows = false;
    bool have_cellsize = false;

    std::string token;
    std::string pending;
    while (in >> token) {
        auto const key = lower(token);
        if (!key.empty() && (std::isalpha(static_cast<unsigned char>(key[0])) != 0)) {
            std::string value;
            if (!(in >> value)) {
                throw ParseError(path.string() + ": header key '" + token + "' has no value");
            }
            double const v = parse_number(value, path);
            if (key == "ncols") {
                grid.header.ncols = static_cast<Eigen::Index>(v);
                have_cols = true;
            } else if (key == "nrows") {
                grid.header.nrows = static_cast<Eigen::Index>(v);
                have_rows = true;
            } else if (key == "cellsize") {
                grid.header.cellsize = v;
                have_cellsize = true;
            } else if (key == "nodata_value") {
                grid.header.nodata_value = v;
            } else if (key != "xllcorner" && key != "yllcorner" && key != "xllcenter" && key != "yllcenter") {
                throw ParseError(path.string() + ": unknown header key '" + token + "'");
            }
            continue;
        }
        pending = token;
        break;
    }
    if (!have_cols || !have_rows || !have_cellsize) {
        throw ParseError(path.string() + ": header must define ncols, nrows and cellsize");
    }
    if (grid.header.ncols <= 0 || grid.header.nrows <= 0 || !(grid.header.cellsize > 0.0)) {
        throw ParseError(path.string() + ": grid dimensions and cellsize must be positive");
    }

    grid.values.resize(grid.header.nrows, grid.header.ncols);
    Eigen::Index const total = grid.header.nrows * grid.header.ncols;
    Eigen::Index k = 0;
    if (!pending.empty()) {
        grid.values(0, 0) = parse_number(pending, path);
        k = 1;
    }
    for (; k < total; ++k) {
        if (!(in >> token)) {
            throw ParseError(path.string() + ": expected " + std::to_string(total) + " cells, found " +
                             std::to_string(k));
        }
        grid.values(k / grid.header.ncols, k % grid.header.ncols) = parse_number(token, path);
    }
    if (in >> token) {
        throw ParseError(path.string() + ": more cells than ncols * nrows");
    }
    return grid;
}

AsciiGrid<int> read_ascii_grid_int(std::filesystem::path const& path)
{
    auto const real = read_ascii_grid(path);
    AsciiGrid<int> grid{real.header, Raster<int>(real.values.rows(), real.values.cols())};
    for (Eigen::Index r = 0; r < real.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < real.values.cols(); ++c) {
            double const v = real.values(r, c);
            if (v != std::floor(v)) {
                throw ParseError(path.string() + ": cell (" + std::to_string(r) + "," + std::to_string(c) +
                                 ") is not an integer");
            }
            grid.values(r, c) = static_cast<int>(v);
        }
    }
    return grid;
}

namespace {

template <typename Format>
void write_grid(std::filesystem::path const& path, Eigen::Index rows, Eigen::Index cols, double cellsize,
                double nodata_value, Format format)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << "ncols " << cols << '\n'
        << "nrows " << rows << '\n'
        << "cellsize " << format_double(cellsize) << '\n'
        << "nodata_value " << format_double(nodata_value) << '\n';
    std::string line;
    for (Eigen::Index r = 0; r < rows; ++r) {
        line.clear();
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (c > 0) {
                line += ' ';
            }
            line += format(r, c);
        }
        line += '\n';
        out << line;
    }
}

} // namespace

void write_ascii_grid(std::filesystem::path const& path, Raster<double> const& values, double cellsize,
                      double nodata_value, GridPrecision precision)
{
    write_grid(path, values.rows(), values.cols(), cellsize, nodata_value, [&](Eigen::Index r, Eigen::Index c) {
        return precision == GridPrecision::fixed_6 ? format_fixed(values(r, c), 6) : format_double(values(r, c));
    });
}

void write_ascii_grid(std::filesystem::path const& path, Raster<int> const& values, double cellsize,
                      double nodata_value)
{
    write_grid(path, values.rows(), values.cols(), cellsize, nodata_value,
               [&](Eigen::Index r, Eigen::Index c) { return std::to_string(values(r, c)); });
}

} // namespace bgi
