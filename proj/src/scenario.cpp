#include "bgi/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bgi/errors.hpp"

namespace bgi {

namespace fs = std::filesystem;

std::vector<std::vector<Eigen::Index>> ZoneMap::cells() const
{
    std::vector<std::vector<Eigen::Index>> out(zone_count());
    for (Eigen::Index k = 0; k < ids.size(); ++k) {
        int const id = ids.data()[k];
        if (id > 0 && static_cast<std::size_t>(id) <= out.size()) {
            out[static_cast<std::size_t>(id - 1)].push_back(k);
        }
    }
    return out;
}

std::vector<std::size_t> ZoneMap::cell_counts() const
{
    std::vector<std::size_t> counts(zone_count(), 0);
    for (Eigen::Index k = 0; k < ids.size(); ++k) {
        int const id = ids.data()[k];
        if (id > 0 && static_cast<std::size_t>(id) <= counts.size()) {
            ++counts[static_cast<std::size_t>(id - 1)];
        }
    }
    return counts;
}

std::vector<double> ZoneMap::areas_m2() const
{
    std::vector<double> areas;
    for (auto count : cell_counts()) {
        areas.push_back(static_cast<double>(count) * cellsize * cellsize);
    }
    return areas;
}

void ZoneMap::validate() const
{
    if (parents.size() != labels.size()) {
        throw ScenarioError(ScenarioError::Kind::invalid_value, "zone labels and lineage differ in length");
    }
    if ((ids < 0).any()) {
        throw ScenarioError(ScenarioError::Kind::invalid_value, "zone ids must be non-negative");
    }
    int const max_id = ids.size() > 0 ? ids.maxCoeff() : 0;
    if (static_cast<std::size_t>(max_id) > zone_count()) {
        throw ScenarioError(ScenarioError::Kind::cross_reference,
                            "zone map references zone " + std::to_string(max_id) + " but only " +
                                std::to_string(zone_count()) + " zones are defined");
    }
    auto const counts = cell_counts();
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) {
            throw ScenarioError(ScenarioError::Kind::zone_id_gap,
                                "zone " + std::to_string(j + 1) + " covers no cells");
        }
    }
}

namespace {

void bisect(std::vector<Eigen::Index> cells, Eigen::Index cols, std::string const& label, int splits,
            std::vector<std::pair<std::string, std::vector<Eigen::Index>>>& out)
{
    if (splits == 0) {
        out.emplace_back(label, std::move(cells));
        return;
    }
    Eigen::Index rmin = cells.front() / cols, rmax = rmin, cmin = cells.front() % cols, cmax = cmin;
    for (auto k : cells) {
        rmin = std::min(rmin, k / cols);
        rmax = std::max(rmax, k / cols);
        cmin = std::min(cmin, k % cols);
        cmax = std::max(cmax, k % cols);
    }
    bool const split_columns = (cmax - cmin) > (rmax - rmin);
    std::sort(cells.begin(), cells.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (split_columns) {
            return std::pair(a % cols, a / cols) < std::pair(b % cols, b / cols);
        }
        return a < b;
    });
    auto const half = static_cast<std::ptrdiff_t>((cells.size() + 1) / 2);
    std::vector<Eigen::Index> first(cells.begin(), cells.begin() + half);
    std::vector<Eigen::Index> second(cells.begin() + half, cells.end());
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    bisect(std::move(first), cols, label + "1", splits - 1, out);
    bisect(std::move(second), cols, label + "2", splits - 1, out);
}

} // namespace

ZoneMap subdivide_zones(ZoneMap const& zones, int factor)
{
    if (factor != 2 && factor != 4) {
        throw InvalidArgument("subdivision factor must be 2 or 4");
    }
    zones.validate();
    int const splits = factor == 2 ? 1 : 2;
    auto const cells = zones.cells();

    ZoneMap out;
    out.cellsize = zones.cellsize;
    out.ids = Raster<int>::Zero(zones.ids.rows(), zones.ids.cols());
    for (std::size_t j = 0; j < cells.size(); ++j) {
        if (cells[j].size() < static_cast<std::size_t>(factor)) {
            throw InvalidArgument("zone " + zones.labels[j] + " has " + std::to_string(cells[j].size()) +
                                  " cells, fewer than the subdivision factor " + std::to_string(factor));
        }
        std::vector<std::pair<std::string, std::vector<Eigen::Index>>> children;
        bisect(cells[j], zones.ids.cols(), zones.labels[j], splits, children);
        for (auto const& [label, child_cells] : children) {
            out.labels.push_back(label);
            out.parents.push_back(static_cast<int>(j + 1));
            int const id = static_cast<int>(out.labels.size());
            for (auto k : child_cells) {
                out.ids.data()[k] = id;
            }
        }
    }
    return out;
}

void CatchmentScenario::validate() const
{
    using Kind = ScenarioError::Kind;
    try {
        grid.validate();
    } catch (InvalidArgument const& e) {
        throw ScenarioError(Kind::invalid_value, e.what());
    }
    if (zones.ids.rows() != grid.rows() || zones.ids.cols() != grid.cols()) {
        throw ScenarioError(Kind::dimension_mismatch, "zone map dimensions differ from the DEM");
    }
    zones.validate();
    if (costs.size() != zone_count()) {
        throw ScenarioError(Kind::cross_reference, "zone map defines " + std::to_string(zone_count()) +
                                                       " zones but the cost table has " +
                                                       std::to_string(costs.size()) + " rows");
    }
    for (std::size_t j = 0; j < costs.size(); ++j) {
        if (costs[j].zone_id != static_cast<int>(j + 1)) {
            throw ScenarioError(Kind::cross_reference, "cost table row " + std::to_string(j + 1) +
                                                           " is for zone " + std::to_string(costs[j].zone_id));
        }
    }
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.cols(); ++c) {
            bool const candidate = grid.surface_at(r, c) == SurfaceClass::permeable_candidate;
            bool const zoned = zones.ids(r, c) > 0;
            if (candidate != zoned) {
                throw ScenarioError(Kind::cross_reference,
                                    "cell (" + std::to_string(r) + "," + std::to_string(c) + ") is " +
                                        (zoned ? "zoned but not a permeable candidate"
                                               : "a permeable candidate outside every zone"));
            }
        }
    }
    if (buildings.rows != grid.rows() || buildings.cols != grid.cols()) {
        throw ScenarioError(Kind::dimension_mismatch, "building set rasterized for a different grid");
    }
    for (auto const& b : buildings.buildings) {
        if (b.footprint.empty()) {
            throw ScenarioError(Kind::invalid_value, "building " + std::to_string(b.id) + " has no cells");
        }
        for (auto k : b.footprint) {
            if (static_cast<SurfaceClass>(grid.surface.data()[k]) != SurfaceClass::building) {
                throw ScenarioError(Kind::cross_reference, "building " + std::to_string(b.id) +
                                                               " covers a cell not classed as building");
            }
        }
    }
    try {
        rain.validate();
        sim.validate();
        criteria.validate();
        cost_params.validate();
    } catch (InvalidArgument const& e) {
        throw ScenarioError(Kind::invalid_value, e.what());
    }
}

Mask activation_mask(CatchmentScenario const& scenario, Genome const& genome)
{
    if (genome.size() != scenario.zone_count()) {
        throw InvalidArgument("genome has " + std::to_string(genome.size()) + " bits but the scenario has " +
                              std::to_string(scenario.zone_count()) + " zones");
    }
    Mask mask(scenario.zones.ids.rows(), scenario.zones.ids.cols());
    for (Eigen::Index k = 0; k < mask.size(); ++k) {
        int const id = scenario.zones.ids.data()[k];
        mask.data()[k] = id > 0 && genome[static_cast<std::size_t>(id - 1)];
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::string trim(std::string const& s)
{
    auto const first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(std::string const& line)
{
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(fs::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(ScenarioError::Kind::missing_file, "cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (table.header.empty()) {
            table.header = split_csv(line);
        } else {
            table.rows.push_back(split_csv(line));
            if (table.rows.back().size() != table.header.size()) {
                throw ParseError(path.string() + ": row has " + std::to_string(table.rows.back().size()) +
                                 " fields, header has " + std::to_string(table.header.size()));
            }
        }
    }
    if (table.header.empty()) {
        throw ParseError(path.string() + ": missing header");
    }
    return table;
}

double to_double(std::string const& text, std::string const& context)
{
    double value = 0.0;
    auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(context + ": '" + text + "' is not a number");
    }
    return value;
}

long long to_integer(std::string const& text, std::string const& context)
{
    long long value = 0;
    auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(context + ": '" + text + "' is not an integer");
    }
    return value;
}

bool to_bool(std::string const& text, std::string const& context)
{
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw ParseError(context + ": '" + text + "' is not a boolean");
}

void require_file(fs::path const& path)
{
    if (!fs::is_regular_file(path)) {
        throw ScenarioError(ScenarioError::Kind::missing_file, "missing scenario file " + path.string());
    }
}

std::ofstream open_output(fs::path const& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

constexpr std::array<char const*, surface_class_count> surface_names{"impervious", "permeable", "green", "building"};

} // namespace

KeyValues read_key_values(fs::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(ScenarioError::Kind::missing_file, "cannot open " + path.string());
    }
    KeyValues values;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_number) + ": expected key=value");
        }
        values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return values;
}

void apply_scenario_config(KeyValues const& values, CatchmentScenario& s)
{
    for (auto const& [key, value] : values) {
        auto const ctx = "scenario.cfg key " + key;
        auto real = [&] { return to_double(value, ctx); };
        auto count = [&] {
            auto const v = to_integer(value, ctx);
            if (v < 0) {
                throw ParseError(ctx + " must be non-negative");
            }
            return static_cast<std::size_t>(v);
        };
        if (key == "cellsize") {
            if (real() != s.grid.cellsize) {
                throw ScenarioError(ScenarioError::Kind::dimension_mismatch,
                                    "scenario.cfg cellsize differs from the grid header");
            }
        } else if (key == "cost.capital_per_m2") {
            s.cost_params.capital_per_m2 = real();
        } else if (key == "cost.operational_per_m2_year") {
            s.cost_params.operational_per_m2_year = real();
        } else if (key == "cost.inflation_rate") {
            s.cost_params.inflation_rate = real();
        } else if (key == "cost.lifespan_years") {
            s.cost_params.lifespan_years = static_cast<int>(to_integer(value, ctx));
        } else if (key == "sim.routing_coefficient") {
            s.sim.routing_coefficient = real();
        } else if (key.rfind("sim.infiltration.", 0) == 0) {
            auto const name = key.substr(17);
            auto const it = std::find(surface_names.begin(), surface_names.end(), name);
            if (it == surface_names.end()) {
                throw ParseError("unknown surface class in " + ctx);
            }
            s.sim.infiltration_mm_hr[static_cast<std::size_t>(it - surface_names.begin())] = real();
        } else if (key == "sim.building_offset") {
            s.sim.building_offset = real();
        } else if (key == "sim.drying_threshold") {
            s.sim.drying_threshold = real();
        } else if (key == "sim.drain_step_factor") {
            s.sim.drain_step_factor = real();
        } else if (key == "sim.open_boundary") {
            s.sim.open_boundary = to_bool(value, ctx);
        } else if (key == "exposure.depth_threshold") {
            s.criteria.depth_threshold = real();
        } else if (key == "exposure.buffer_radius") {
            s.criteria.buffer_radius = static_cast<int>(to_integer(value, ctx));
        } else if (key == "exposure.aggregation") {
            s.criteria.aggregation = parse_aggregation(value);
        } else if (key == "rain.return_period_years") {
            s.rain.return_period_years = real();
        } else if (key == "rain.duration_min") {
            s.rain.duration_min = real();
        } else if (key == "rain.timestep_s") {
            s.rain.timestep_s = real();
        } else if (key == "ga.population_size") {
            s.ga.population_size = count();
        } else if (key == "ga.max_generations") {
            s.ga.max_generations = count();
        } else if (key == "ga.crossover_probability") {
            s.ga.crossover_probability = real();
        } else if (key == "ga.mutation_probability") {
            s.ga.mutation_probability = real();
        } else if (key == "ga.uniqueness_retry_cap") {
            s.ga.uniqueness_retry_cap = count();
        } else {
            throw ParseError("unknown scenario.cfg key '" + key + "'");
        }
    }
}

KeyValues scenario_config(CatchmentScenario const& s)
{
    KeyValues v;
    v["cellsize"] = format_double(s.grid.cellsize);
    v["cost.capital_per_m2"] = format_double(s.cost_params.capital_per_m2);
    v["cost.operational_per_m2_year"] = format_double(s.cost_params.operational_per_m2_year);
    v["cost.inflation_rate"] = format_double(s.cost_params.inflation_rate);
    v["cost.lifespan_years"] = std::to_string(s.cost_params.lifespan_years);
    v["sim.routing_coefficient"] = format_double(s.sim.routing_coefficient);
    for (std::size_t k = 0; k < surface_names.size(); ++k) {
        v[std::string("sim.infiltration.") + surface_names[k]] = format_double(s.sim.infiltration_mm_hr[k]);
    }
    v["sim.building_offset"] = format_double(s.sim.building_offset);
    v["sim.drying_threshold"] = format_double(s.sim.drying_threshold);
    v["sim.drain_step_factor"] = format_double(s.sim.drain_step_factor);
    v["sim.open_boundary"] = s.sim.open_boundary ? "true" : "false";
    v["exposure.depth_threshold"] = format_double(s.criteria.depth_threshold);
    v["exposure.buffer_radius"] = std::to_string(s.criteria.buffer_radius);
    v["exposure.aggregation"] = to_string(s.criteria.aggregation);
    v["rain.return_period_years"] = format_double(s.rain.return_period_years);
    v["rain.duration_min"] = format_double(s.rain.duration_min);
    v["rain.timestep_s"] = format_double(s.rain.timestep_s);
    if (s.ga.population_size) {
        v["ga.population_size"] = std::to_string(*s.ga.population_size);
    }
    if (s.ga.max_generations) {
        v["ga.max_generations"] = std::to_string(*s.ga.max_generations);
    }
    if (s.ga.crossover_probability) {
        v["ga.crossover_probability"] = format_double(*s.ga.crossover_probability);
    }
    if (s.ga.mutation_probability) {
        v["ga.mutation_probability"] = format_double(*s.ga.mutation_probability);
    }
    if (s.ga.uniqueness_retry_cap) {
        v["ga.uniqueness_retry_cap"] = std::to_string(*s.ga.uniqueness_retry_cap);
    }
    return v;
}

CatchmentScenario load_scenario(fs::path const& directory)
{
    using Kind = ScenarioError::Kind;
    for (auto const* name : {"dem.asc", "surface.asc", "zones.asc", "buildings.csv", "costs.csv", "rain.csv",
                             "scenario.cfg"}) {
        require_file(directory / name);
    }

    CatchmentScenario s;
    auto const dem = read_ascii_grid(directory / "dem.asc");
    auto const surface = read_ascii_grid_int(directory / "surface.asc");
    auto const zones = read_ascii_grid_int(directory / "zones.asc");
    for (auto const* other : {&surface.header, &zones.header}) {
        if (other->nrows != dem.header.nrows || other->ncols != dem.header.ncols) {
            throw ScenarioError(Kind::dimension_mismatch, "surface/zone rasters do not match the DEM dimensions");
        }
        if (other->cellsize != dem.header.cellsize) {
            throw ScenarioError(Kind::dimension_mismatch, "surface/zone rasters do not match the DEM cellsize");
        }
    }
    if ((surface.values < 0).any() || (surface.values >= surface_class_count).any()) {
        throw ScenarioError(Kind::invalid_value, "surface.asc contains an unknown surface class");
    }
    s.grid.cellsize = dem.header.cellsize;
    s.grid.elevation = dem.values;
    s.grid.surface = surface.values.cast<std::uint8_t>();

    s.zones.cellsize = dem.header.cellsize;
    s.zones.ids = zones.values;
    if ((zones.values < 0).any()) {
        throw ScenarioError(Kind::invalid_value, "zones.asc contains a negative zone id");
    }
    int const max_id = zones.values.maxCoeff();
    {
        std::vector<bool> seen(static_cast<std::size_t>(max_id) + 1, false);
        for (Eigen::Index k = 0; k < zones.values.size(); ++k) {
            seen[static_cast<std::size_t>(zones.values.data()[k])] = true;
        }
        for (int id = 1; id <= max_id; ++id) {
            if (!seen[static_cast<std::size_t>(id)]) {
                throw ScenarioError(Kind::zone_id_gap, "zones.asc uses zone " + std::to_string(max_id) +
                                                           " but zone " + std::to_string(id) + " has no cells");
            }
        }
    }

    apply_scenario_config(read_key_values(directory / "scenario.cfg"), s);

    // Costs: header selects area-derived or precomputed lifecycle costs.
    auto const costs = read_csv(directory / "costs.csv");
    auto const& h = costs.header;
    if (h.size() < 2 || h[0] != "zone_id" || (h[1] != "area_m2" && h[1] != "lifecycle_cost") ||
        (h.size() >= 3 && h[2] != "label") || (h.size() == 4 && h[3] != "parent") || h.size() > 4) {
        throw ParseError("costs.csv header must be zone_id,area_m2[,label[,parent]] or "
                         "zone_id,lifecycle_cost[,label[,parent]]");
    }
    if (costs.rows.size() != static_cast<std::size_t>(max_id)) {
        throw ScenarioError(Kind::cross_reference, "zones.asc references zone " + std::to_string(max_id) +
                                                       " but costs.csv has " + std::to_string(costs.rows.size()) +
                                                       " rows");
    }
    std::vector<int> ids;
    std::vector<double> values;
    for (std::size_t j = 0; j < costs.rows.size(); ++j) {
        auto const& row = costs.rows[j];
        ids.push_back(static_cast<int>(to_integer(row[0], "costs.csv zone_id")));
        if (ids.back() != static_cast<int>(j + 1)) {
            throw ScenarioError(Kind::cross_reference, "costs.csv rows must list zones 1.." +
                                                           std::to_string(max_id) + " in order");
        }
        values.push_back(to_double(row[1], "costs.csv"));
        s.zones.labels.push_back(h.size() >= 3 && !row[2].empty() ? row[2] : std::to_string(j + 1));
        s.zones.parents.push_back(h.size() == 4 ? static_cast<int>(to_integer(row[3], "costs.csv parent")) : 0);
    }
    try {
        s.costs = h[1] == "area_m2" ? ZoneCostTable::from_areas(ids, values, s.cost_params)
                                    : ZoneCostTable::from_costs(ids, values, s.zones.areas_m2());
    } catch (InvalidArgument const& e) {
        throw ScenarioError(Kind::invalid_value, e.what());
    }

    auto const buildings = read_csv(directory / "buildings.csv");
    if (buildings.header != std::vector<std::string>{"building_id", "row0", "col0", "row1", "col1"}) {
        throw ParseError("buildings.csv header must be building_id,row0,col0,row1,col1");
    }
    for (auto const& row : buildings.rows) {
        BuildingRectangle rect;
        rect.id = static_cast<int>(to_integer(row[0], "buildings.csv"));
        rect.row0 = to_integer(row[1], "buildings.csv");
        rect.col0 = to_integer(row[2], "buildings.csv");
        rect.row1 = to_integer(row[3], "buildings.csv");
        rect.col1 = to_integer(row[4], "buildings.csv");
        s.building_rectangles.push_back(rect);
    }
    s.buildings = rasterize_buildings(s.building_rectangles, s.grid.rows(), s.grid.cols());

    auto const rain = read_csv(directory / "rain.csv");
    if (rain.header != std::vector<std::string>{"timestep", "intensity_mm_hr"}) {
        throw ParseError("rain.csv header must be timestep,intensity_mm_hr");
    }
    for (std::size_t k = 0; k < rain.rows.size(); ++k) {
        if (to_integer(rain.rows[k][0], "rain.csv timestep") != static_cast<long long>(k)) {
            throw ParseError("rain.csv timesteps must count 0, 1, 2, ... in order");
        }
        s.rain.intensity_mm_hr.push_back(to_double(rain.rows[k][1], "rain.csv intensity"));
    }

    s.validate();
    return s;
}

void save_scenario(CatchmentScenario const& s, fs::path const& directory)
{
    fs::create_directories(directory);
    write_ascii_grid(directory / "dem.asc", s.grid.elevation, s.grid.cellsize);
    write_ascii_grid(directory / "surface.asc", Raster<int>(s.grid.surface.cast<int>()), s.grid.cellsize);
    write_ascii_grid(directory / "zones.asc", s.zones.ids, s.grid.cellsize);

    {
        auto out = open_output(directory / "buildings.csv");
        out << "building_id,row0,col0,row1,col1\n";
        for (auto const& b : s.building_rectangles) {
            out << b.id << ',' << b.row0 << ',' << b.col0 << ',' << b.row1 << ',' << b.col1 << '\n';
        }
    }
    {
        auto out = open_output(directory / "costs.csv");
        bool const areas = s.costs.source() == ZoneCostTable::Source::area;
        out << (areas ? "zone_id,area_m2,label,parent\n" : "zone_id,lifecycle_cost,label,parent\n");
        for (std::size_t j = 0; j < s.costs.size(); ++j) {
            auto const& row = s.costs[j];
            out << row.zone_id << ',' << format_double(areas ? row.area_m2 : row.lifecycle_cost) << ','
                << s.zones.labels[j] << ',' << s.zones.parents[j] << '\n';
        }
    }
    {
        auto out = open_output(directory / "rain.csv");
        out << "timestep,intensity_mm_hr\n";
        for (std::size_t k = 0; k < s.rain.intensity_mm_hr.size(); ++k) {
            out << k << ',' << format_double(s.rain.intensity_mm_hr[k]) << '\n';
        }
    }
    {
        auto out = open_output(directory / "scenario.cfg");
        for (auto const& [key, value] : scenario_config(s)) {
            out << key << " = " << value << '\n';
        }
    }
}

CatchmentScenario subdivide_scenario(CatchmentScenario const& scenario, int factor)
{
    CatchmentScenario out = scenario;
    out.zones = subdivide_zones(scenario.zones, factor);

    auto const child_counts = out.zones.cell_counts();
    auto const parent_counts = scenario.zones.cell_counts();
    std::vector<ZoneCost> rows;
    std::size_t child = 0;
    for (std::size_t j = 0; j < scenario.zone_count(); ++j) {
        auto const& parent = scenario.costs[j];
        double area_left = parent.area_m2;
        double cost_left = parent.lifecycle_cost;
        for (int k = 0; k < factor; ++k, ++child) {
            ZoneCost row;
            row.zone_id = static_cast<int>(child + 1);
            if (k + 1 == factor) {
                row.area_m2 = area_left;
                row.lifecycle_cost = cost_left;
            } else {
                auto const part = static_cast<double>(child_counts[child]);
                auto const whole = static_cast<double>(parent_counts[j]);
                row.area_m2 = parent.area_m2 * part / whole;
                row.lifecycle_cost = snap_cost(parent.lifecycle_cost * part / whole);
                area_left -= row.area_m2;
                cost_left -= row.lifecycle_cost;
            }
            if (scenario.costs.source() == ZoneCostTable::Source::area) {
                row.lifecycle_cost = snap_cost(scenario.costs.unit_cost() * row.area_m2);
            }
            rows.push_back(row);
        }
    }
    out.costs = ZoneCostTable::from_rows(std::move(rows), scenario.costs.source(), scenario.costs.unit_cost());
    out.validate();
    return out;
}

CatchmentScenario with_rain(CatchmentScenario scenario, RainEvent rain)
{
    rain.validate();
    scenario.rain = std::move(rain);
    return scenario;
}

} // namespace bgi
