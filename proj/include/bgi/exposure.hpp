#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bgi/flood_simulator.hpp"

namespace bgi {

struct Building {
    int id = 0;
    std::vector<Eigen::Index> footprint; // row-major cell indices
};

struct BuildingSet {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::vector<Building> buildings;

    [[nodiscard]] std::size_t size() const noexcept { return buildings.size(); }
};

struct BuildingRectangle {
    int id = 0;
    Eigen::Index row0 = 0, col0 = 0, row1 = 0, col1 = 0; // inclusive
};

// Rasterizes rectangles; throws ScenarioError(building_outside_grid) for
// rectangles that leave the grid or are inverted.
[[nodiscard]] BuildingSet rasterize_buildings(std::vector<BuildingRectangle> const& rectangles, Eigen::Index rows,
                                              Eigen::Index cols);

enum class Aggregation { any_cell_max, mean_over_buffer };

struct ExposureCriteria {
    double depth_threshold = 0.10;
    int buffer_radius = 1;
    Aggregation aggregation = Aggregation::any_cell_max;

    void validate() const;
};

[[nodiscard]] std::string to_string(Aggregation aggregation);
[[nodiscard]] Aggregation parse_aggregation(std::string const& text);

// Cells within Chebyshev distance `radius` of the footprint, excluding the
// footprint and any building-class cell; ascending row-major indices.
[[nodiscard]] std::vector<Eigen::Index> buffer_ring(Building const& building, RasterGrid const& grid, int radius);

struct ExposureOutcome {
    bool exposed = false;
    bool empty_buffer = false;
};

// I_E for one building from the flood's max-depth field.
[[nodiscard]] ExposureOutcome building_exposed(Building const& building, RasterGrid const& grid,
                                               FloodResult const& result, ExposureCriteria const& criteria);

struct ExposureCount {
    std::int64_t exposed = 0;
    std::vector<int> empty_buffer_buildings; // ids, for warnings
};

// F_R = sum_i I_E(B_i).
[[nodiscard]] ExposureCount count_exposed(BuildingSet const& buildings, RasterGrid const& grid,
                                          FloodResult const& result, ExposureCriteria const& criteria);

// Precomputed buffer rings for repeated evaluation against one grid.
class ExposureIndex {
public:
    ExposureIndex(BuildingSet const& buildings, RasterGrid const& grid, ExposureCriteria const& criteria);

    [[nodiscard]] ExposureCount count(Raster<double> const& max_depth) const;
    [[nodiscard]] std::size_t building_count() const noexcept { return rings_.size(); }

private:
    ExposureCriteria criteria_;
    std::vector<int> ids_;
    std::vector<std::vector<Eigen::Index>> rings_;
};

} // namespace bgi
