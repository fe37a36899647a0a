#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bgi/errors.hpp"
#include "bgi/evaluator.hpp"
#include "bgi/flood_simulator.hpp"
#include "bgi/rng.hpp"
#include "bgi/scenario.hpp"

using bgi::FloodResult;
using bgi::Mask;
using bgi::RainEvent;
using bgi::RasterGrid;
using bgi::SimParams;
using bgi::SurfaceClass;

namespace {

RasterGrid flat_grid(Eigen::Index rows, Eigen::Index cols, SurfaceClass cls, double cellsize = 2.0)
{
    RasterGrid g;
    g.cellsize = cellsize;
    g.elevation = bgi::Raster<double>::Constant(rows, cols, 5.0);
    g.surface = bgi::Raster<std::uint8_t>::Constant(rows, cols, static_cast<std::uint8_t>(cls));
    return g;
}

RainEvent steady_rain(std::vector<double> intensities, double dt = 300.0)
{
    RainEvent r;
    r.timestep_s = dt;
    r.intensity_mm_hr = std::move(intensities);
    return r;
}

Mask mask_of(RasterGrid const& g, bool value)
{
    return Mask::Constant(g.rows(), g.cols(), value);
}

void require_identical(FloodResult const& a, FloodResult const& b)
{
    CHECK((a.max_depth == b.max_depth).all());
    CHECK((a.final_depth == b.final_depth).all());
    CHECK(a.rainfall_volume == b.rainfall_volume);
    CHECK(a.infiltrated_volume == b.infiltrated_volume);
    CHECK(a.boundary_outflow_volume == b.boundary_outflow_volume);
    CHECK(a.steps == b.steps);
}

} // namespace

TEST_CASE("zero rainfall leaves everything dry")
{
    auto const grid = flat_grid(6, 5, SurfaceClass::impervious);
    auto const r = bgi::simulate_event(grid, mask_of(grid, false), steady_rain({0, 0, 0}), SimParams{});
    CHECK(r.max_depth.maxCoeff() == 0.0);
    CHECK(r.final_depth.maxCoeff() == 0.0);
    CHECK(r.rainfall_volume == 0.0);
    CHECK(r.infiltrated_volume == 0.0);
    CHECK(r.boundary_outflow_volume == 0.0);
    CHECK(r.drained);
}

TEST_CASE("single permeable cell follows the closed-form water balance")
{
    SimParams p;
    p.open_boundary = false;
    auto const grid = flat_grid(1, 1, SurfaceClass::permeable_candidate, 1.0);
    double const capacity = 30.0 * 300.0 / 3.6e6; // metres per step

    // rain below one step of capacity: everything infiltrates in the first step
    auto light = bgi::simulate_event(grid, mask_of(grid, true), steady_rain({12.0}), p);
    double const rain_light = 12.0 * 300.0 / 3.6e6;
    CHECK(light.infiltrated_volume == doctest::Approx(std::min(rain_light, capacity)).epsilon(1e-14));
    CHECK(light.final_depth(0, 0) == 0.0);
    CHECK(light.max_depth(0, 0) == 0.0);

    // heavy rain: depth is rain minus capacity, then drains at the capacity rate
    auto heavy = bgi::simulate_event(grid, mask_of(grid, true), steady_rain({300.0}), p);
    double const rain_heavy = 300.0 * 300.0 / 3.6e6;
    auto const k = static_cast<double>(heavy.steps);
    CHECK(heavy.max_depth(0, 0) == doctest::Approx(rain_heavy - capacity).epsilon(1e-12));
    CHECK(heavy.infiltrated_volume == doctest::Approx(std::min(rain_heavy, capacity * k)).epsilon(1e-12));
    CHECK(heavy.final_depth(0, 0) == doctest::Approx(std::max(rain_heavy - capacity * k, 0.0)).epsilon(1e-12));

    // an inactive candidate cell behaves as impervious
    auto sealed = bgi::simulate_event(grid, mask_of(grid, false), steady_rain({12.0}), p);
    CHECK(sealed.infiltrated_volume == 0.0);
    CHECK(sealed.final_depth(0, 0) == doctest::Approx(rain_light).epsilon(1e-14));
}

TEST_CASE("uniform rain on a closed flat impervious grid stays uniform")
{
    SimParams p;
    p.open_boundary = false;
    auto const grid = flat_grid(7, 9, SurfaceClass::impervious);
    auto const r = bgi::simulate_event(grid, mask_of(grid, false), steady_rain({10, 40, 10}), p);
    CHECK((r.final_depth == r.final_depth(0, 0)).all());
    CHECK((r.max_depth == r.max_depth(0, 0)).all());
    CHECK(r.final_depth(0, 0) == doctest::Approx(60.0 * 300.0 / 3.6e6).epsilon(1e-12));
}

TEST_CASE("two cells: the upper one drains into the lower one")
{
    SimParams p;
    p.open_boundary = false;
    p.drain_step_factor = 200.0;
    RasterGrid grid = flat_grid(1, 2, SurfaceClass::impervious, 1.0);
    grid.elevation(0, 0) = 1.0;
    grid.elevation(0, 1) = 0.0;
    bgi::Raster<double> start(1, 2);
    start << 0.1, 0.0;
    auto const r = bgi::simulate_event(grid, mask_of(grid, false), steady_rain({0.0}), p, start);

    // by hand: A keeps (1 - alpha) of its depth each step, B takes the rest
    double a = 0.1;
    double b = 0.0;
    std::size_t steps = 0;
    for (;;) {
        double const moved = p.routing_coefficient * std::min(a, 1.0 + a - b);
        a -= moved;
        b += moved;
        ++steps;
        if (2.0 * moved < p.drying_threshold * 2.0) {
            break;
        }
    }
    CHECK(r.drained);
    CHECK(r.steps == steps);
    CHECK(r.final_depth(0, 0) == doctest::Approx(a).epsilon(1e-12));
    CHECK(r.final_depth(0, 1) == doctest::Approx(b).epsilon(1e-12));
    CHECK(r.final_depth(0, 0) <= p.drying_threshold);
    CHECK(r.final_depth(0, 1) == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(r.mass_balance_error() < 1e-12);
}

TEST_CASE("open boundary lets water leave the domain")
{
    RasterGrid grid = flat_grid(1, 3, SurfaceClass::impervious, 1.0);
    grid.elevation << 2.0, 1.0, 0.0;
    auto const r = bgi::simulate_event(grid, mask_of(grid, false), steady_rain({60.0}), SimParams{});
    CHECK(r.boundary_outflow_volume > 0.0);
    CHECK(r.mass_balance_error() < 1e-9);
}

TEST_CASE("buildings shed rain and block flow")
{
    SimParams p;
    p.open_boundary = false;
    auto grid = flat_grid(3, 3, SurfaceClass::impervious, 1.0);
    grid.surface(1, 1) = static_cast<std::uint8_t>(SurfaceClass::building);
    auto const r = bgi::simulate_event(grid, mask_of(grid, false), steady_rain({60.0}), p);
    CHECK(r.max_depth(1, 1) == 0.0);
    CHECK(r.rainfall_volume == doctest::Approx(8.0 * 60.0 * 300.0 / 3.6e6).epsilon(1e-12));
}

TEST_CASE("cell visiting order does not change any value")
{
    bgi::SyntheticSpec spec;
    spec.rows = 24;
    spec.cols = 24;
    spec.zone_block_rows = 2;
    spec.zone_block_cols = 2;
    spec.building_count = 6;
    spec.green_patches = 1;
    spec.candidate_fraction = 0.15;
    auto const s = bgi::generate_synthetic_catchment(spec);
    auto const mask = bgi::activation_mask(s, bgi::Genome::from_string("1010"));

    auto const cells = s.grid.rows() * s.grid.cols();
    std::vector<Eigen::Index> reversed(static_cast<std::size_t>(cells));
    std::iota(reversed.rbegin(), reversed.rend(), Eigen::Index{0});
    std::vector<Eigen::Index> shuffled(reversed);
    bgi::Rng rng(5);
    for (std::size_t k = shuffled.size() - 1; k > 0; --k) {
        std::swap(shuffled[k], shuffled[rng.below(k + 1)]);
    }

    auto const natural = bgi::simulate_event(s.grid, mask, s.rain, s.sim);
    require_identical(natural, bgi::detail::simulate_event_ordered(s.grid, mask, s.rain, s.sim, std::nullopt, reversed));
    require_identical(natural, bgi::detail::simulate_event_ordered(s.grid, mask, s.rain, s.sim, std::nullopt, shuffled));
}

TEST_CASE("randomized catchments conserve mass and never go negative")
{
    bgi::Rng rng(123);
    for (int trial = 0; trial < 25; ++trial) {
        bgi::SyntheticSpec spec;
        spec.rows = 32;
        spec.cols = 32;
        spec.zone_block_rows = 2;
        spec.zone_block_cols = 4;
        spec.building_count = 8;
        spec.green_patches = 2;
        spec.seed = rng.next();
        spec.slope = 0.1 * rng.uniform();
        spec.rain_depth_mm = 5.0 + 60.0 * rng.uniform();
        spec.candidate_fraction = 0.1;
        auto const s = bgi::generate_synthetic_catchment(spec);
        auto const genome = bgi::Genome::from_index(rng.below(256), 8);
        auto const r = bgi::simulate_event(s.grid, bgi::activation_mask(s, genome), s.rain, s.sim);
        CHECK(r.mass_balance_error() <= 1e-6);
        CHECK(r.final_depth.minCoeff() >= 0.0);
        CHECK(r.min_depth >= 0.0);
        CHECK((r.max_depth >= r.final_depth).all());
        CHECK(r.rainfall_volume == doctest::Approx(spec.rain_depth_mm / 1000.0 * r.cell_area *
                                                   static_cast<double>((s.grid.surface != 3).count()))
                                       .epsilon(1e-9));
    }
}

TEST_CASE("activating another zone on a flat closed grid never lowers infiltration")
{
    SimParams p;
    p.open_boundary = false;
    auto grid = flat_grid(12, 12, SurfaceClass::impervious, 1.0);
    Mask zone_a = mask_of(grid, false);
    Mask zone_b = mask_of(grid, false);
    zone_a.block(2, 2, 3, 4).setConstant(true);
    zone_b.block(8, 6, 2, 5).setConstant(true);
    for (Eigen::Index r = 0; r < 12; ++r) {
        for (Eigen::Index c = 0; c < 12; ++c) {
            if (zone_a(r, c) || zone_b(r, c)) {
                grid.surface(r, c) = static_cast<std::uint8_t>(SurfaceClass::permeable_candidate);
            }
        }
    }
    auto const rain = steady_rain({20, 80, 20});
    auto infiltrated = [&](Mask const& m) { return bgi::simulate_event(grid, m, rain, p).infiltrated_volume; };
    double const none = infiltrated(mask_of(grid, false));
    double const a = infiltrated(zone_a);
    double const b = infiltrated(zone_b);
    double const both = infiltrated(zone_a || zone_b);
    CHECK(none == 0.0);
    CHECK(a >= none);
    CHECK(b >= none);
    CHECK(both >= a);
    CHECK(both >= b);
}

TEST_CASE("input validation")
{
    auto grid = flat_grid(2, 2, SurfaceClass::impervious);
    CHECK_THROWS_AS((void)bgi::simulate_event(grid, Mask::Constant(3, 2, false), steady_rain({1}), SimParams{}),
                    bgi::InvalidArgument);
    SimParams p;
    p.routing_coefficient = 0.0;
    CHECK_THROWS_AS((void)bgi::simulate_event(grid, mask_of(grid, false), steady_rain({1}), p), bgi::InvalidArgument);
    CHECK_THROWS_AS((void)bgi::simulate_event(grid, mask_of(grid, false), steady_rain({-1}), SimParams{}),
                    bgi::InvalidArgument);
    grid.elevation(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)bgi::simulate_event(grid, mask_of(grid, false), steady_rain({1}), SimParams{}),
                    bgi::InvalidArgument);
}

TEST_CASE("symmetric peaked hyetograph")
{
    auto const r = RainEvent::symmetric_peaked(31.1, 30.0, 300.0, 100.0);
    REQUIRE(r.intensity_mm_hr.size() == 6);
    CHECK(r.total_depth_mm() == doctest::Approx(31.1).epsilon(1e-12));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(r.intensity_mm_hr[k] == doctest::Approx(r.intensity_mm_hr[5 - k]).epsilon(1e-14));
    }
    CHECK(r.intensity_mm_hr[2] > r.intensity_mm_hr[0]);
}

TEST_CASE("evaluator contract")
{
    auto const s = bgi::generate_synthetic_catchment(bgi::SyntheticSpec{});
    bgi::RasterFloodEvaluator evaluator;
    auto const zero = bgi::Genome(10);
    require_identical(evaluator.evaluate(zero, s), evaluator.evaluate(zero, s));
    CHECK_THROWS_AS((void)evaluator.evaluate(bgi::Genome(9), s), bgi::InvalidArgument);

    bgi::ScenarioObjective objective(s, evaluator);
    auto const base = objective(zero);
    auto const full = objective(bgi::Genome(10, true));
    CHECK(base.cost == 0.0);
    CHECK(full.cost == s.costs.total());
    CHECK(full.risk <= base.risk);
    CHECK(objective.invocations() == 2);
}
