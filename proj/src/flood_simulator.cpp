#include "bgi/flood_simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include "bgi/errors.hpp"

namespace bgi {

bool is_surface_class(int code) noexcept
{
    return code >= 0 && code < surface_class_count;
}

void RasterGrid::validate() const
{
    if (elevation.rows() <= 0 || elevation.cols() <= 0) {
        throw InvalidArgument("grid must have at least one cell");
    }
    if (surface.rows() != elevation.rows() || surface.cols() != elevation.cols()) {
        throw InvalidArgument("surface class raster does not match the elevation raster");
    }
    if (!(cellsize > 0.0)) {
        throw InvalidArgument("cellsize must be positive");
    }
    if (!elevation.allFinite()) {
        throw InvalidArgument("elevation must be finite everywhere");
    }
    if ((surface >= std::uint8_t{surface_class_count}).any()) {
        throw InvalidArgument("unknown surface class code");
    }
}

double RainEvent::total_depth_mm() const
{
    double total = 0.0;
    for (double i : intensity_mm_hr) {
        total += i * timestep_s / 3600.0;
    }
    return total;
}

void RainEvent::validate() const
{
    if (!(timestep_s > 0.0)) {
        throw InvalidArgument("rain timestep must be positive");
    }
    for (double i : intensity_mm_hr) {
        if (!(i >= 0.0) || !std::isfinite(i)) {
            throw InvalidArgument("rain intensities must be finite and non-negative");
        }
    }
}

RainEvent RainEvent::symmetric_peaked(double total_depth_mm, double duration_min, double timestep_s,
                                      double return_period_years)
{
    RainEvent event;
    event.return_period_years = return_period_years;
    event.duration_min = duration_min;
    event.timestep_s = timestep_s;
    auto const steps = std::max<long>(1, std::lround(duration_min * 60.0 / timestep_s));
    std::vector<double> weights(static_cast<std::size_t>(steps));
    double weight_sum = 0.0;
    for (long k = 0; k < steps; ++k) {
        weights[static_cast<std::size_t>(k)] = static_cast<double>(std::min(k + 1, steps - k));
        weight_sum += weights[static_cast<std::size_t>(k)];
    }
    for (double w : weights) {
        double const depth_mm = total_depth_mm * w / weight_sum;
        event.intensity_mm_hr.push_back(depth_mm * 3600.0 / timestep_s);
    }
    return event;
}

void SimParams::validate() const
{
    if (!(routing_coefficient > 0.0 && routing_coefficient <= 1.0)) {
        throw InvalidArgument("routing coefficient must lie in (0, 1]");
    }
    for (double rate : infiltration_mm_hr) {
        if (!(rate >= 0.0)) {
            throw InvalidArgument("infiltration rates must be non-negative");
        }
    }
    if (!(building_offset >= 0.0) || !(drying_threshold > 0.0) || !(drain_step_factor >= 0.0)) {
        throw InvalidArgument("building offset, drying threshold and drain factor must be non-negative");
    }
}

double FloodResult::mass_balance_error() const
{
    double const inputs = rainfall_volume + initial_volume;
    double const accounted = storage_volume() + infiltrated_volume + boundary_outflow_volume;
    if (inputs == 0.0) {
        return std::abs(accounted);
    }
    return std::abs(inputs - accounted) / inputs;
}

namespace {

using Field = Raster<double>;

// Working state for one event on a grid padded with one ghost cell per side.
// Ghost heads are fixed: the adjacent edge cell's ground level for an open
// boundary (free outfall), +inf for a closed one. Every array is allocated
// once; each pass is elementwise over the previous state, so the visiting
// order of cells cannot change any value.
class SurfaceFlow {
public:
    SurfaceFlow(RasterGrid const& grid, Mask const& active, SimParams const& params, double timestep_s,
                std::span<Eigen::Index const> order)
        : alpha_(params.routing_coefficient), rows_(grid.rows()), cols_(grid.cols()), stride_(cols_ + 2),
          area_(grid.cell_area())
    {
        Eigen::Index const padded = (rows_ + 2) * stride_;
        head_.assign(padded, 0.0);
        base_.assign(padded, 0.0);
        depth_.assign(padded, 0.0);
        wet_.assign(padded, 0.0);
        capacity_.assign(padded, 0.0);
        outflow_.assign(padded, 0.0);
        scratch_.assign(padded, 0.0);
        lowest_.assign(padded, 0.0);
        for (auto* f : {&east_, &west_, &north_, &south_}) {
            f->assign(padded, 0.0);
        }

        double const to_metres = timestep_s / 3.6e6;
        double const closed = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < rows_; ++r) {
            for (Eigen::Index c = 0; c < cols_; ++c) {
                auto const i = index(r, c);
                auto const cls = grid.surface_at(r, c);
                bool const building = cls == SurfaceClass::building;
                base_[i] = grid.elevation(r, c) + (building ? params.building_offset : 0.0);
                wet_[i] = building ? 0.0 : 1.0;
                double rate = params.infiltration_mm_hr[static_cast<std::size_t>(cls)];
                if (cls == SurfaceClass::permeable_candidate && !active(r, c)) {
                    rate = params.infiltration_mm_hr[static_cast<std::size_t>(SurfaceClass::impervious)];
                }
                capacity_[i] = rate * to_metres;
            }
        }
        wet_cells_ = std::accumulate(wet_.begin(), wet_.end(), 0.0);
        for (Eigen::Index r = 0; r < rows_; ++r) {
            head_[index(r, -1)] = params.open_boundary ? grid.elevation(r, 0) : closed;
            head_[index(r, cols_)] = params.open_boundary ? grid.elevation(r, cols_ - 1) : closed;
        }
        for (Eigen::Index c = 0; c < cols_; ++c) {
            head_[index(-1, c)] = params.open_boundary ? grid.elevation(0, c) : closed;
            head_[index(rows_, c)] = params.open_boundary ? grid.elevation(rows_ - 1, c) : closed;
        }

        if (order.empty()) {
            for (Eigen::Index r = 0; r < rows_; ++r) {
                for (Eigen::Index c = 0; c < cols_; ++c) {
                    cells_.push_back(index(r, c));
                }
            }
        } else {
            for (auto k : order) {
                cells_.push_back(index(k / cols_, k % cols_));
            }
        }
        natural_order_ = order.empty();
    }

    void set_depth(Field const& depth)
    {
        for (Eigen::Index r = 0; r < rows_; ++r) {
            for (Eigen::Index c = 0; c < cols_; ++c) {
                depth_[index(r, c)] = depth(r, c);
            }
        }
    }

    Field depth() const
    {
        Field out(rows_, cols_);
        for (Eigen::Index r = 0; r < rows_; ++r) {
            for (Eigen::Index c = 0; c < cols_; ++c) {
                out(r, c) = depth_[index(r, c)];
            }
        }
        return out;
    }

    double total_depth() const { return std::accumulate(depth_.begin(), depth_.end(), 0.0); }
    double lowest_depth() const { return *std::min_element(lowest_.begin(), lowest_.end()); }

    struct StepLedger {
        double rain = 0.0;
        double infiltrated = 0.0;
        double boundary = 0.0;
        double change = 0.0;
    };

    // One explicit step; max_depth (padded layout) is raised cellwise.
    StepLedger step(double rain_m, std::vector<double>& max_depth)
    {
        StepLedger ledger;
        ledger.rain = rain_m > 0.0 ? rain_m * wet_cells_ * area_ : 0.0;

        for_each_cell([&](Eigen::Index i) {
            double d = depth_[i] + wet_[i] * rain_m;
            double const sink = std::min(d, capacity_[i]);
            d -= sink;
            scratch_[i] = sink;
            outflow_[i] = d; // depth after infiltration, consumed by the routing passes
            head_[i] = base_[i] + d;
        });
        ledger.infiltrated = lane_sum(scratch_) * area_;

        Eigen::Index const s = stride_;
        for_each_cell([&](Eigen::Index i) {
            double const d = outflow_[i];
            double const h = head_[i];
            double const e = std::max(h - head_[i + 1], 0.0);
            double const w = std::max(h - head_[i - 1], 0.0);
            double const n = std::max(h - head_[i - s], 0.0);
            double const so = std::max(h - head_[i + s], 0.0);
            double const sum = e + w + n + so;
            double const peak = std::max(std::max(e, w), std::max(n, so));
            double const out = alpha_ * std::min(d, peak);
            double const share = out / std::max(sum, std::numeric_limits<double>::min()); // out is 0 when sum is
            east_[i] = e * share;
            west_[i] = w * share;
            north_[i] = n * share;
            south_[i] = so * share;
            outflow_[i] = d - out; // remaining depth
        });

        double boundary = 0.0;
        for (Eigen::Index r = 0; r < rows_; ++r) {
            boundary += west_[index(r, 0)] + east_[index(r, cols_ - 1)];
        }
        for (Eigen::Index c = 0; c < cols_; ++c) {
            boundary += north_[index(0, c)] + south_[index(rows_ - 1, c)];
        }
        ledger.boundary = boundary * area_;

        for_each_cell([&](Eigen::Index i) {
            double const d = outflow_[i] + east_[i - 1] + west_[i + 1] + south_[i - s] + north_[i + s];
            scratch_[i] = std::abs(d - depth_[i]);
            depth_[i] = d;
            max_depth[i] = std::max(max_depth[i], d);
            lowest_[i] = std::min(lowest_[i], d);
        });
        ledger.change = lane_sum(scratch_);
        return ledger;
    }

    Eigen::Index padded_size() const { return (rows_ + 2) * stride_; }

    Field unpad(std::vector<double> const& values) const
    {
        Field out(rows_, cols_);
        for (Eigen::Index r = 0; r < rows_; ++r) {
            for (Eigen::Index c = 0; c < cols_; ++c) {
                out(r, c) = values[index(r, c)];
            }
        }
        return out;
    }

    double area() const { return area_; }

private:
    Eigen::Index index(Eigen::Index r, Eigen::Index c) const { return (r + 1) * stride_ + (c + 1); }

    // Fixed eight-lane summation; ghost entries of the scratch array stay zero.
    static double lane_sum(std::vector<double> const& v)
    {
        std::array<double, 8> lanes{};
        std::size_t k = 0;
        for (; k + 8 <= v.size(); k += 8) {
            for (std::size_t j = 0; j < 8; ++j) {
                lanes[j] += v[k + j];
            }
        }
        double total = 0.0;
        for (; k < v.size(); ++k) {
            total += v[k];
        }
        for (double lane : lanes) {
            total += lane;
        }
        return total;
    }

    template <typename F>
    void for_each_cell(F&& f)
    {
        if (natural_order_) {
            for (Eigen::Index r = 0; r < rows_; ++r) {
                Eigen::Index const first = index(r, 0);
#pragma GCC ivdep
                for (Eigen::Index i = first; i < first + cols_; ++i) {
                    f(i);
                }
            }
        } else {
            for (auto i : cells_) {
                f(i);
            }
        }
    }

    double alpha_;
    Eigen::Index rows_;
    Eigen::Index cols_;
    Eigen::Index stride_;
    double area_;
    double wet_cells_ = 0.0;
    bool natural_order_ = true;
    std::vector<Eigen::Index> cells_;
    std::vector<double> head_, base_, depth_, wet_, capacity_, outflow_, scratch_, lowest_;
    std::vector<double> east_, west_, north_, south_;
};

} // namespace

namespace detail {

FloodResult simulate_event_ordered(RasterGrid const& grid, Mask const& active, RainEvent const& rain,
                                   SimParams const& params, std::optional<Raster<double>> const& initial_depth,
                                   std::span<Eigen::Index const> order)
{
    grid.validate();
    rain.validate();
    params.validate();
    if (active.rows() != grid.rows() || active.cols() != grid.cols()) {
        throw InvalidArgument("activation mask does not match the grid");
    }

    SurfaceFlow flow(grid, active, params, rain.timestep_s, order);
    FloodResult result;
    result.cell_area = grid.cell_area();
    if (initial_depth) {
        if (initial_depth->rows() != grid.rows() || initial_depth->cols() != grid.cols() ||
            (*initial_depth < 0.0).any()) {
            throw InvalidArgument("initial depth must match the grid and be non-negative");
        }
        flow.set_depth(*initial_depth);
        result.initial_volume = initial_depth->sum() * result.cell_area;
    }
    std::vector<double> max_depth(static_cast<std::size_t>(flow.padded_size()), 0.0);
    if (initial_depth) {
        auto const d = flow.depth();
        max_depth.assign(max_depth.size(), 0.0);
        for (Eigen::Index r = 0; r < grid.rows(); ++r) {
            for (Eigen::Index c = 0; c < grid.cols(); ++c) {
                max_depth[static_cast<std::size_t>((r + 1) * (grid.cols() + 2) + c + 1)] = d(r, c);
            }
        }
    }

    auto step = [&](double intensity_mm_hr) {
        auto const ledger = flow.step(intensity_mm_hr * rain.timestep_s / 3.6e6, max_depth);
        result.rainfall_volume += ledger.rain;
        result.infiltrated_volume += ledger.infiltrated;
        result.boundary_outflow_volume += ledger.boundary;
        ++result.steps;
        return ledger.change;
    };

    for (double intensity : rain.intensity_mm_hr) {
        step(intensity);
    }

    auto const cells = static_cast<double>(grid.rows() * grid.cols());
    auto const drain_cap =
        static_cast<std::size_t>(std::ceil(params.drain_step_factor * static_cast<double>(rain.intensity_mm_hr.size())));
    result.drained = flow.total_depth() == 0.0;
    for (std::size_t k = 0; k < drain_cap && !result.drained; ++k) {
        if (step(0.0) < params.drying_threshold * cells) {
            result.drained = true;
        }
    }
    result.final_depth = flow.depth();
    result.min_depth = flow.lowest_depth();
    result.max_depth = flow.unpad(max_depth);
    return result;
}

} // namespace detail

FloodResult simulate_event(RasterGrid const& grid, Mask const& active, RainEvent const& rain,
                           SimParams const& params, std::optional<Raster<double>> const& initial_depth)
{
    return detail::simulate_event_ordered(grid, active, rain, params, initial_depth, {});
}

} // namespace bgi
