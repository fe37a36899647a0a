#include "bgi/exposure.hpp"

#include <algorithm>

#include "bgi/errors.hpp"

namespace bgi {

BuildingSet rasterize_buildings(std::vector<BuildingRectangle> const& rectangles, Eigen::Index rows,
                                Eigen::Index cols)
{
    BuildingSet set{rows, cols, {}};
    for (auto const& rect : rectangles) {
        if (rect.row0 < 0 || rect.col0 < 0 || rect.row1 >= rows || rect.col1 >= cols || rect.row0 > rect.row1 ||
            rect.col0 > rect.col1) {
            throw ScenarioError(ScenarioError::Kind::building_outside_grid,
                                "building " + std::to_string(rect.id) + " lies outside the " + std::to_string(rows) +
                                    "x" + std::to_string(cols) + " grid");
        }
        Building b{rect.id, {}};
        for (Eigen::Index r = rect.row0; r <= rect.row1; ++r) {
            for (Eigen::Index c = rect.col0; c <= rect.col1; ++c) {
                b.footprint.push_back(r * cols + c);
            }
        }
        set.buildings.push_back(std::move(b));
    }
    return set;
}

void ExposureCriteria::validate() const
{
    if (!(depth_threshold > 0.0)) {
        throw InvalidArgument("exposure depth threshold must be positive");
    }
    if (buffer_radius < 1) {
        throw InvalidArgument("exposure buffer radius must be at least one cell");
    }
}

std::string to_string(Aggregation aggregation)
{
    return aggregation == Aggregation::any_cell_max ? "any_cell_max" : "mean_over_buffer";
}

Aggregation parse_aggregation(std::string const& text)
{
    if (text == "any_cell_max") {
        return Aggregation::any_cell_max;
    }
    if (text == "mean_over_buffer") {
        return Aggregation::mean_over_buffer;
    }
    throw ParseError("unknown exposure aggregation '" + text + "'");
}

std::vector<Eigen::Index> buffer_ring(Building const& building, RasterGrid const& grid, int radius)
{
    auto const rows = grid.rows();
    auto const cols = grid.cols();
    std::vector<bool> in_footprint(static_cast<std::size_t>(rows * cols), false);
    for (auto cell : building.footprint) {
        if (cell < 0 || cell >= rows * cols) {
            throw ScenarioError(ScenarioError::Kind::building_outside_grid,
                                "building " + std::to_string(building.id) + " has a cell outside the grid");
        }
        in_footprint[static_cast<std::size_t>(cell)] = true;
    }
    std::vector<Eigen::Index> ring;
    for (auto cell : building.footprint) {
        Eigen::Index const r0 = cell / cols;
        Eigen::Index const c0 = cell % cols;
        for (Eigen::Index r = std::max<Eigen::Index>(0, r0 - radius); r <= std::min(rows - 1, r0 + radius); ++r) {
            for (Eigen::Index c = std::max<Eigen::Index>(0, c0 - radius); c <= std::min(cols - 1, c0 + radius); ++c) {
                auto const k = r * cols + c;
                if (!in_footprint[static_cast<std::size_t>(k)] && grid.surface_at(r, c) != SurfaceClass::building) {
                    ring.push_back(k);
                }
            }
        }
    }
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    return ring;
}

namespace {

bool ring_exposed(std::vector<Eigen::Index> const& ring, Raster<double> const& max_depth,
                  ExposureCriteria const& criteria)
{
    double const* depth = max_depth.data();
    if (criteria.aggregation == Aggregation::any_cell_max) {
        double peak = 0.0;
        for (auto k : ring) {
            peak = std::max(peak, depth[k]);
        }
        return peak >= criteria.depth_threshold;
    }
    double sum = 0.0;
    for (auto k : ring) {
        sum += depth[k];
    }
    return sum / static_cast<double>(ring.size()) >= criteria.depth_threshold;
}

} // namespace

ExposureOutcome building_exposed(Building const& building, RasterGrid const& grid, FloodResult const& result,
                                 ExposureCriteria const& criteria)
{
    criteria.validate();
    auto const ring = buffer_ring(building, grid, criteria.buffer_radius);
    if (ring.empty()) {
        return ExposureOutcome{false, true};
    }
    return ExposureOutcome{ring_exposed(ring, result.max_depth, criteria), false};
}

ExposureCount count_exposed(BuildingSet const& buildings, RasterGrid const& grid, FloodResult const& result,
                            ExposureCriteria const& criteria)
{
    ExposureCount count;
    for (auto const& b : buildings.buildings) {
        auto const outcome = building_exposed(b, grid, result, criteria);
        count.exposed += outcome.exposed ? 1 : 0;
        if (outcome.empty_buffer) {
            count.empty_buffer_buildings.push_back(b.id);
        }
    }
    return count;
}

ExposureIndex::ExposureIndex(BuildingSet const& buildings, RasterGrid const& grid, ExposureCriteria const& criteria)
    : criteria_(criteria)
{
    criteria.validate();
    for (auto const& b : buildings.buildings) {
        ids_.push_back(b.id);
        rings_.push_back(buffer_ring(b, grid, criteria.buffer_radius));
    }
}

ExposureCount ExposureIndex::count(Raster<double> const& max_depth) const
{
    ExposureCount count;
    for (std::size_t i = 0; i < rings_.size(); ++i) {
        if (rings_[i].empty()) {
            count.empty_buffer_buildings.push_back(ids_[i]);
        } else if (ring_exposed(rings_[i], max_depth, criteria_)) {
            ++count.exposed;
        }
    }
    return count;
}

} // namespace bgi
