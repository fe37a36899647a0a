#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bgi/raster.hpp"

namespace bgi {

enum class SurfaceClass : std::uint8_t { impervious = 0, permeable_candidate = 1, green = 2, building = 3 };

inline constexpr int surface_class_count = 4;

[[nodiscard]] bool is_surface_class(int code) noexcept;

struct RasterGrid {
    double cellsize = 1.0;
    Raster<double> elevation;
    Raster<std::uint8_t> surface; // SurfaceClass codes

    [[nodiscard]] Eigen::Index rows() const noexcept { return elevation.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return elevation.cols(); }
    [[nodiscard]] double cell_area() const noexcept { return cellsize * cellsize; }
    [[nodiscard]] SurfaceClass surface_at(Eigen::Index r, Eigen::Index c) const
    {
        return static_cast<SurfaceClass>(surface(r, c));
    }

    void validate() const;
};

struct RainEvent {
    double return_period_years = 0.0; // metadata
    double duration_min = 0.0;        // metadata
    double timestep_s = 300.0;
    std::vector<double> intensity_mm_hr; // one value per timestep

    [[nodiscard]] double total_depth_mm() const;
    void validate() const;

    // Symmetric triangular hyetograph with the given total depth; the number
    // of steps is duration / timestep (rounded, at least one).
    static RainEvent symmetric_peaked(double total_depth_mm, double duration_min, double timestep_s,
                                      double return_period_years);
};

struct SimParams {
    double routing_coefficient = 0.5; // alpha
    // Indexed by SurfaceClass. Candidate cells use the permeable rate only when activated.
    std::array<double, surface_class_count> infiltration_mm_hr{0.0, 30.0, 15.0, 0.0};
    double building_offset = 10.0;
    double drying_threshold = 1e-5;
    double drain_step_factor = 10.0;
    bool open_boundary = true;

    void validate() const;
};

struct FloodResult {
    Raster<double> max_depth;
    Raster<double> final_depth;
    double rainfall_volume = 0.0;
    double initial_volume = 0.0;
    double infiltrated_volume = 0.0;
    double boundary_outflow_volume = 0.0;
    double cell_area = 1.0;
    std::size_t steps = 0;
    double min_depth = 0.0; // lowest cell depth seen at any step
    bool drained = true;

    [[nodiscard]] double storage_volume() const { return final_depth.sum() * cell_area; }
    // |inputs - (storage + infiltrated + outflow)| / inputs; zero when there is no input.
    [[nodiscard]] double mass_balance_error() const;
};

// Explicit cellular rainfall-runoff-infiltration model. Each step adds rain
// to non-building cells, infiltrates up to the cell's capacity, then routes
// alpha * min(depth, largest head drop) to strictly lower 4-neighbours in
// proportion to the head drop. Updates are Jacobi-style: every flux is
// computed from the previous state. After the rain the model keeps stepping
// until the summed absolute depth change falls below drying_threshold per
// cell or drain_step_factor * rain steps have elapsed.
//
// active marks candidate cells converted to permeable surface.
[[nodiscard]] FloodResult simulate_event(RasterGrid const& grid, Mask const& active, RainEvent const& rain,
                                         SimParams const& params,
                                         std::optional<Raster<double>> const& initial_depth = std::nullopt);

namespace detail {
// simulate_event visiting cells in the given row-major order within each
// pass (empty = natural order). Exists to check order independence.
[[nodiscard]] FloodResult simulate_event_ordered(RasterGrid const& grid, Mask const& active, RainEvent const& rain,
                                                 SimParams const& params,
                                                 std::optional<Raster<double>> const& initial_depth,
                                                 std::span<Eigen::Index const> order);
} // namespace detail

} // namespace bgi
