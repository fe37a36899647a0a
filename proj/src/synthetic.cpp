#include <algorithm>
#include <cmath>
#include <numeric>

#include "bgi/errors.hpp"
#include "bgi/rng.hpp"
#include "bgi/scenario.hpp"

namespace bgi {

void SyntheticSpec::validate() const
{
    if (rows < 8 || cols < 8 || !(cellsize > 0.0)) {
        throw InvalidArgument("synthetic grid must be at least 8x8 with a positive cellsize");
    }
    if (zone_block_rows < 1 || zone_block_cols < 1 || rows / zone_block_rows < 6 || cols / zone_block_cols < 6) {
        throw InvalidArgument("zone blocks must be at least 6x6 cells");
    }
    if (!(candidate_fraction > 0.0 && candidate_fraction < 0.5)) {
        throw InvalidArgument("candidate fraction must lie in (0, 0.5)");
    }
    if (building_count < 0 || green_patches < 0 || building_min_size < 1 || building_max_size < building_min_size) {
        throw InvalidArgument("invalid building or green patch layout");
    }
    if (!(slope >= 0.0) || !(noise_amplitude >= 0.0) || !(noise_radius > 0.0) || noise_bumps < 0) {
        throw InvalidArgument("slope and noise parameters must be non-negative");
    }
}

namespace {

struct Block {
    Eigen::Index r0, r1, c0, c1; // half-open
};

std::vector<std::size_t> largest_remainder(std::vector<double> const& weights, std::size_t total)
{
    double const sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        double const exact = static_cast<double>(total) * weights[j] / sum;
        counts[j] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[j];
        remainders.emplace_back(exact - std::floor(exact), j);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](auto const& a, auto const& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
        ++counts[remainders[k % remainders.size()].second];
    }
    return counts;
}

} // namespace

CatchmentScenario generate_synthetic_catchment(SyntheticSpec const& spec)
{
    spec.validate();
    Rng rng(spec.seed);
    auto const rows = spec.rows;
    auto const cols = spec.cols;

    CatchmentScenario s;
    s.grid.cellsize = spec.cellsize;
    s.cost_params = spec.cost;
    s.sim = spec.sim;
    s.criteria = spec.criteria;

    // Plane falling towards the south-east plus smooth seeded bumps.
    double const fall = spec.slope * spec.cellsize / std::sqrt(2.0);
    double const top = 10.0 + fall * static_cast<double>(rows + cols);
    s.grid.elevation.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            s.grid.elevation(r, c) = top - fall * static_cast<double>(r + c);
        }
    }
    double const two_sigma_sq = 2.0 * spec.noise_radius * spec.noise_radius;
    for (int b = 0; b < spec.noise_bumps; ++b) {
        double const cr = rng.uniform() * static_cast<double>(rows);
        double const cc = rng.uniform() * static_cast<double>(cols);
        double const amplitude = (2.0 * rng.uniform() - 1.0) * spec.noise_amplitude;
        if (amplitude == 0.0) {
            continue;
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                double const dr = static_cast<double>(r) - cr;
                double const dc = static_cast<double>(c) - cc;
                s.grid.elevation(r, c) += amplitude * std::exp(-(dr * dr + dc * dc) / two_sigma_sq);
            }
        }
    }

    // Zones: one per block, sized by seeded weights so the total candidate
    // area is exactly round(fraction * cells).
    auto const zone_total = static_cast<std::size_t>(spec.zone_count());
    std::vector<Block> blocks;
    for (int br = 0; br < spec.zone_block_rows; ++br) {
        for (int bc = 0; bc < spec.zone_block_cols; ++bc) {
            blocks.push_back(Block{br * rows / spec.zone_block_rows, (br + 1) * rows / spec.zone_block_rows,
                                   bc * cols / spec.zone_block_cols, (bc + 1) * cols / spec.zone_block_cols});
        }
    }
    std::vector<double> weights;
    for (std::size_t j = 0; j < zone_total; ++j) {
        weights.push_back(0.5 + rng.uniform());
    }
    auto const target = static_cast<std::size_t>(std::llround(spec.candidate_fraction * static_cast<double>(rows * cols)));
    auto const counts = largest_remainder(weights, target);

    s.zones.cellsize = spec.cellsize;
    s.zones.ids = Raster<int>::Zero(rows, cols);
    s.grid.surface = Raster<std::uint8_t>::Constant(rows, cols, static_cast<std::uint8_t>(SurfaceClass::impervious));
    for (std::size_t j = 0; j < zone_total; ++j) {
        auto const& b = blocks[j];
        Eigen::Index const width = b.c1 - b.c0 - 2;
        Eigen::Index const height = b.r1 - b.r0 - 2;
        auto const k = static_cast<Eigen::Index>(counts[j]);
        Eigen::Index const needed_rows = (k + width - 1) / width;
        if (k < 1 || needed_rows > height) {
            throw InvalidArgument("zone " + std::to_string(j + 1) + " needs " + std::to_string(k) +
                                  " cells, more than its block holds");
        }
        Eigen::Index const start = b.r0 + 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(height - needed_rows + 1)));
        for (Eigen::Index m = 0; m < k; ++m) {
            Eigen::Index const r = start + m / width;
            Eigen::Index const c = b.c0 + 1 + m % width;
            s.zones.ids(r, c) = static_cast<int>(j + 1);
            s.grid.surface(r, c) = static_cast<std::uint8_t>(SurfaceClass::permeable_candidate);
        }
        s.zones.labels.push_back(std::to_string(j + 1));
        s.zones.parents.push_back(0);
    }

    auto is_class = [&](Eigen::Index r, Eigen::Index c, SurfaceClass cls) {
        return s.grid.surface_at(r, c) == cls;
    };
    auto fits = [&](BuildingRectangle const& rect, Eigen::Index halo) {
        if (rect.row0 < 0 || rect.col0 < 0 || rect.row1 >= rows || rect.col1 >= cols || rect.row0 > rect.row1 ||
            rect.col0 > rect.col1) {
            return false;
        }
        for (Eigen::Index r = rect.row0; r <= rect.row1; ++r) {
            for (Eigen::Index c = rect.col0; c <= rect.col1; ++c) {
                if (!is_class(r, c, SurfaceClass::impervious)) {
                    return false;
                }
            }
        }
        for (Eigen::Index r = std::max<Eigen::Index>(0, rect.row0 - halo); r <= std::min(rows - 1, rect.row1 + halo); ++r) {
            for (Eigen::Index c = std::max<Eigen::Index>(0, rect.col0 - halo); c <= std::min(cols - 1, rect.col1 + halo);
                 ++c) {
                if (is_class(r, c, SurfaceClass::building)) {
                    return false;
                }
            }
        }
        return true;
    };
    auto paint = [&](BuildingRectangle const& rect, SurfaceClass cls) {
        s.grid.surface.block(rect.row0, rect.col0, rect.row1 - rect.row0 + 1, rect.col1 - rect.col0 + 1)
            .setConstant(static_cast<std::uint8_t>(cls));
    };

    if (!spec.explicit_buildings.empty()) {
        for (auto const& rect : spec.explicit_buildings) {
            if (!fits(rect, 0)) {
                throw ScenarioError(ScenarioError::Kind::invalid_value,
                                    "building " + std::to_string(rect.id) + " overlaps a zone, another building "
                                                                            "or the grid edge");
            }
            paint(rect, SurfaceClass::building);
            s.building_rectangles.push_back(rect);
        }
    } else {
        auto const span = static_cast<std::size_t>(spec.building_max_size - spec.building_min_size + 1);
        int placed = 0;
        for (int attempt = 0; placed < spec.building_count; ++attempt) {
            if (attempt > 100000) {
                throw InvalidArgument("could not place " + std::to_string(spec.building_count) + " buildings");
            }
            auto const h = static_cast<Eigen::Index>(spec.building_min_size + static_cast<int>(rng.below(span)));
            auto const w = static_cast<Eigen::Index>(spec.building_min_size + static_cast<int>(rng.below(span)));
            BuildingRectangle rect;
            rect.id = placed + 1;
            rect.row0 = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(rows - h - 1)));
            rect.col0 = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(cols - w - 1)));
            rect.row1 = rect.row0 + h - 1;
            rect.col1 = rect.col0 + w - 1;
            if (fits(rect, 1)) {
                paint(rect, SurfaceClass::building);
                s.building_rectangles.push_back(rect);
                ++placed;
            }
        }
    }

    for (int placed = 0, attempt = 0; placed < spec.green_patches; ++attempt) {
        if (attempt > 100000) {
            throw InvalidArgument("could not place green patches");
        }
        BuildingRectangle rect;
        rect.row0 = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(rows - 4)));
        rect.col0 = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(cols - 4)));
        rect.row1 = rect.row0 + 3;
        rect.col1 = rect.col0 + 3;
        if (fits(rect, 1)) {
            paint(rect, SurfaceClass::green);
            ++placed;
        }
    }

    s.buildings = rasterize_buildings(s.building_rectangles, rows, cols);
    std::vector<int> ids(zone_total);
    std::iota(ids.begin(), ids.end(), 1);
    s.costs = ZoneCostTable::from_areas(ids, s.zones.areas_m2(), s.cost_params);
    s.rain = RainEvent::symmetric_peaked(spec.rain_depth_mm, spec.rain_duration_min, spec.rain_timestep_s,
                                         spec.return_period_years);
    s.validate();
    return s;
}

} // namespace bgi
