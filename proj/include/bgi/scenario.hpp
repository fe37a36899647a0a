#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bgi/cost_model.hpp"
#include "bgi/exposure.hpp"
#include "bgi/flood_simulator.hpp"
#include "bgi/genome.hpp"
#include "bgi/raster.hpp"

namespace bgi {

// Candidate cells grouped into intervention zones. ids holds 0 for
// non-candidate cells and 1..n otherwise. Labels follow the lineage
// convention: a split appends one digit to the parent's label.
struct ZoneMap {
    Raster<int> ids;
    std::vector<std::string> labels;  // labels[j] names zone j+1
    std::vector<int> parents;         // parent zone id in the map this one was split from; 0 if none
    double cellsize = 1.0;

    [[nodiscard]] std::size_t zone_count() const noexcept { return labels.size(); }
    [[nodiscard]] std::vector<std::vector<Eigen::Index>> cells() const; // row-major indices per zone
    [[nodiscard]] std::vector<std::size_t> cell_counts() const;
    [[nodiscard]] std::vector<double> areas_m2() const;

    // Every id lies in 0..n and every zone covers at least one cell.
    void validate() const;
};

// Splits each zone into `factor` (2 or 4) children by bisecting its cells
// along the longer bounding-box axis; factor 4 bisects each half again.
[[nodiscard]] ZoneMap subdivide_zones(ZoneMap const& zones, int factor);

// Optional GA settings carried by scenario.cfg (ga.* keys).
struct GASettings {
    std::optional<std::size_t> population_size;
    std::optional<std::size_t> max_generations;
    std::optional<double> crossover_probability;
    std::optional<double> mutation_probability;
    std::optional<std::size_t> uniqueness_retry_cap;
};

struct CatchmentScenario {
    RasterGrid grid;
    ZoneMap zones;
    std::vector<BuildingRectangle> building_rectangles;
    BuildingSet buildings;
    CostParams cost_params;
    ZoneCostTable costs;
    RainEvent rain;
    ExposureCriteria criteria;
    SimParams sim;
    GASettings ga;

    [[nodiscard]] std::size_t zone_count() const noexcept { return zones.zone_count(); }

    // Cross-reference checks; throws ScenarioError.
    void validate() const;
};

// Cells that infiltrate as permeable surface under the genome.
[[nodiscard]] Mask activation_mask(CatchmentScenario const& scenario, Genome const& genome);

// Directory layout: dem.asc, surface.asc, zones.asc, buildings.csv,
// costs.csv, rain.csv, scenario.cfg.
[[nodiscard]] CatchmentScenario load_scenario(std::filesystem::path const& directory);
void save_scenario(CatchmentScenario const& scenario, std::filesystem::path const& directory);

// Scenario with zones split by subdivide_zones. Child areas (and, for
// precomputed tables, costs) split the parent's exactly in proportion to
// cell counts.
[[nodiscard]] CatchmentScenario subdivide_scenario(CatchmentScenario const& scenario, int factor);

// Same scenario under a different rainfall event.
[[nodiscard]] CatchmentScenario with_rain(CatchmentScenario scenario, RainEvent rain);

// key=value configuration file; '#' starts a comment.
using KeyValues = std::map<std::string, std::string>;
[[nodiscard]] KeyValues read_key_values(std::filesystem::path const& path);
void apply_scenario_config(KeyValues const& values, CatchmentScenario& scenario);
[[nodiscard]] KeyValues scenario_config(CatchmentScenario const& scenario);

struct SyntheticSpec {
    Eigen::Index rows = 64;
    Eigen::Index cols = 64;
    double cellsize = 5.0;
    double slope = 0.033;          // fall towards the south-east
    double noise_amplitude = 1.0;  // metres, peak of each smooth bump
    int noise_bumps = 60;
    double noise_radius = 3.0;     // cells
    int zone_block_rows = 2;
    int zone_block_cols = 5;
    double candidate_fraction = 0.25;
    int building_count = 50;
    int building_min_size = 2;
    int building_max_size = 4;
    int green_patches = 4;
    std::vector<BuildingRectangle> explicit_buildings; // replaces random placement when non-empty
    double rain_depth_mm = 31.1;
    double rain_duration_min = 30.0;
    double rain_timestep_s = 300.0;
    double return_period_years = 100.0;
    std::uint64_t seed = 1;
    CostParams cost;
    SimParams sim;
    ExposureCriteria criteria;

    [[nodiscard]] int zone_count() const noexcept { return zone_block_rows * zone_block_cols; }
    void validate() const;
};

// Deterministic sloped-plane catchment with block zones and rectangular
// buildings placed off zone cells.
[[nodiscard]] CatchmentScenario generate_synthetic_catchment(SyntheticSpec const& spec);

// Design-storm totals for the 30- and 100-year, 30-minute events.
inline constexpr double rain_depth_30yr_mm = 21.9;
inline constexpr double rain_depth_100yr_mm = 31.1;

} // namespace bgi
