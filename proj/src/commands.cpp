#include "bgi/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bgi/csv_output.hpp"
#include "bgi/errors.hpp"
#include "bgi/evaluator.hpp"
#include "bgi/raster.hpp"
#include "bgi/scenario.hpp"
#include "bgi/validation.hpp"

namespace bgi {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 0;
};

struct GAOverrides {
    std::optional<std::size_t> population_size;
    std::optional<std::size_t> max_generations;
    std::optional<double> crossover_probability;
    std::optional<double> mutation_probability;
    std::optional<std::size_t> retry_cap;
};

void add_ga_flags(CLI::App* cmd, GAOverrides& ga)
{
    cmd->add_option("--pop", ga.population_size, "Population size");
    cmd->add_option("--gens", ga.max_generations, "Maximum generations");
    cmd->add_option("--crossover", ga.crossover_probability, "Crossover probability");
    cmd->add_option("--mutation", ga.mutation_probability, "Mutation probability");
    cmd->add_option("--retry-cap", ga.retry_cap, "Uniqueness retry cap");
}

void add_jobs_flag(CLI::App* cmd, CommonOptions& common)
{
    cmd->add_option("--jobs", common.jobs, "Concurrent evaluations (0 = all cores)")->capture_default_str();
}

// Built-in defaults for n zones, then scenario.cfg ga.* keys, then flags.
GAConfig resolve_ga(CatchmentScenario const& scenario, GAOverrides const& flags, std::uint64_t seed, std::size_t jobs)
{
    GAConfig config = default_config_for_zones(scenario.zone_count());
    auto const& cfg = scenario.ga;
    config.population_size = flags.population_size.value_or(cfg.population_size.value_or(config.population_size));
    config.max_generations = flags.max_generations.value_or(cfg.max_generations.value_or(config.max_generations));
    config.crossover_probability =
        flags.crossover_probability.value_or(cfg.crossover_probability.value_or(config.crossover_probability));
    config.mutation_probability =
        flags.mutation_probability.value_or(cfg.mutation_probability.value_or(config.mutation_probability));
    config.uniqueness_retry_cap = flags.retry_cap.value_or(cfg.uniqueness_retry_cap.value_or(config.uniqueness_retry_cap));
    config.rng_seed = seed;
    config.jobs = jobs;
    config.validate();
    return config;
}

fs::path prepare_out(std::string const& out)
{
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

std::string ga_lines(GAConfig const& c)
{
    std::ostringstream s;
    s << "population_size " << c.population_size << '\n'
      << "max_generations " << c.max_generations << '\n'
      << "crossover_probability " << format_double(c.crossover_probability) << '\n'
      << "mutation_probability " << format_double(c.mutation_probability) << '\n'
      << "uniqueness_retry_cap " << c.uniqueness_retry_cap << '\n'
      << "seed " << c.rng_seed << '\n';
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_generate(CommonOptions const& common, SyntheticSpec spec, std::ostream& out)
{
    spec.seed = common.seed.value_or(spec.seed);
    auto const scenario = generate_synthetic_catchment(spec);
    save_scenario(scenario, prepare_out(common.out));
    out << "generated " << scenario.zone_count() << " zones, " << scenario.buildings.size() << " buildings in "
        << common.out << '\n';
    return exit_success;
}

int cmd_subdivide(CommonOptions const& common, int factor, std::ostream& out)
{
    auto const scenario = load_scenario(common.scenario);
    auto const finer = subdivide_scenario(scenario, factor);
    save_scenario(finer, prepare_out(common.out));
    out << "subdivided " << scenario.zone_count() << " zones into " << finer.zone_count() << '\n';
    return exit_success;
}

int cmd_simulate(CommonOptions const& common, std::string const& bits, std::ostream& out, std::ostream& err)
{
    auto const scenario = load_scenario(common.scenario);
    auto const genome = Genome::from_string(bits);
    if (genome.size() != scenario.zone_count()) {
        throw InvalidArgument("genome has " + std::to_string(genome.size()) + " bits, the scenario has " +
                              std::to_string(scenario.zone_count()) + " zones");
    }
    RasterFloodEvaluator evaluator;
    auto const result = evaluator.evaluate(genome, scenario);
    auto const exposure = count_exposed(scenario.buildings, scenario.grid, result, scenario.criteria);
    for (int id : exposure.empty_buffer_buildings) {
        err << "warning: building " << id << " has an empty buffer and counts as not exposed\n";
    }

    auto const dir = prepare_out(common.out);
    write_ascii_grid(dir / "max_depth.asc", result.max_depth, scenario.grid.cellsize, -9999.0, GridPrecision::fixed_6);
    std::ostringstream r;
    r << "genome " << genome.to_string() << '\n'
      << "cost " << format_double(solution_cost(genome, scenario.costs)) << '\n'
      << "exposed_buildings " << exposure.exposed << '\n'
      << "buildings " << scenario.buildings.size() << '\n'
      << "steps " << result.steps << '\n'
      << "drained " << (result.drained ? "yes" : "no") << '\n'
      << "max_depth_m " << format_fixed(result.max_depth.maxCoeff(), 6) << '\n'
      << "rainfall_m3 " << format_double(result.rainfall_volume) << '\n'
      << "initial_storage_m3 " << format_double(result.initial_volume) << '\n'
      << "infiltrated_m3 " << format_double(result.infiltrated_volume) << '\n'
      << "boundary_outflow_m3 " << format_double(result.boundary_outflow_volume) << '\n'
      << "final_storage_m3 " << format_double(result.storage_volume()) << '\n'
      << "mass_balance_relative_error " << format_double(result.mass_balance_error()) << '\n';
    write_text(dir / "simulation.txt", r.str());
    out << r.str();
    return exit_success;
}

int cmd_enumerate(CommonOptions const& common, std::size_t cap, std::ostream& out)
{
    auto const scenario = load_scenario(common.scenario);
    if (scenario.zone_count() > cap) {
        throw EnumerationRefused(scenario.zone_count(), cap);
    }
    RasterFloodEvaluator evaluator;
    ScenarioObjective objective(scenario, evaluator);
    auto const result = enumerate_all(scenario.zone_count(), objective.function(), cap, common.jobs);

    auto const dir = prepare_out(common.out);
    write_repository_csv(dir / "repository.csv", result);
    write_pareto_csv(dir / "pareto.csv", result.front);
    write_contribution_csv(dir / "contribution.csv", zone_contribution(result.front, scenario.zone_count()),
                           scenario.zones.labels);
    auto const efficiency = efficiency_report(result.objectives.size(), scenario.zone_count(), result.wall_seconds,
                                              objective.evaluation_seconds());
    std::ostringstream r;
    r << "zones " << scenario.zone_count() << '\n'
      << "front_size " << result.front.size() << '\n'
      << "front_objective_vectors " << result.front.objective_set().size() << '\n'
      << format_efficiency(efficiency, false);
    write_text(dir / "report.txt", r.str());
    out << r.str() << "wall_seconds " << format_fixed(result.wall_seconds, 3) << '\n';
    return exit_success;
}

int cmd_optimize(CommonOptions const& common, GAOverrides const& flags, std::string const& reference_path,
                 std::ostream& out)
{
    auto const scenario = load_scenario(common.scenario);
    auto const config = resolve_ga(scenario, flags, *common.seed, common.jobs);
    auto const n = scenario.zone_count();

    std::optional<std::vector<ObjectiveVector>> target;
    if (!reference_path.empty()) {
        auto const reference = read_pareto_csv(reference_path);
        if (!reference.empty() && reference.members.front().genome.size() != n) {
            throw InvalidArgument("reference front does not match the scenario's zone count");
        }
        target = reference.objective_set();
    }

    auto const space = search_space_size(n);
    std::vector<ConvergenceRecord> history;
    auto observer = [&](std::size_t generation, std::span<Individual const> population,
                        SolutionRepository const& repo) {
        auto const front = front_objectives(population);
        history.push_back(ConvergenceRecord{generation, front.size(), static_cast<double>(repo.size()) / space,
                                            target && front == *target});
        return true;
    };

    RasterFloodEvaluator evaluator;
    ScenarioObjective objective(scenario, evaluator);
    auto const start = std::chrono::steady_clock::now();
    auto const result = run_optimization(n, objective.function(), config, observer);
    double const wall = seconds_since(start);
    auto const front = optimizer_front(result);

    auto const dir = prepare_out(common.out);
    write_pareto_csv(dir / "pareto.csv", front);
    write_repository_csv(dir / "repository.csv", result.repository);
    write_history_csv(dir / "history.csv", history, target.has_value());
    write_contribution_csv(dir / "contribution.csv", zone_contribution(front, n), scenario.zones.labels);

    auto const efficiency = efficiency_report(result.evaluations, n, wall, objective.evaluation_seconds());
    std::ostringstream r;
    r << "zones " << n << '\n'
      << ga_lines(config) << "generations_run " << result.generations_run << '\n'
      << "search_space_exhausted " << (result.search_space_exhausted ? "yes" : "no") << '\n'
      << "front_size " << front.size() << '\n'
      << format_efficiency(efficiency, false);
    if (target) {
        auto const hit = std::find_if(history.begin(), history.end(), [](auto const& h) { return h.converged; });
        r << "converged_generation "
          << (hit == history.end() ? std::string("not converged") : std::to_string(hit->generation)) << '\n';
    }
    write_text(dir / "report.txt", r.str());
    out << r.str() << "wall_seconds " << format_fixed(wall, 3) << '\n';
    return exit_success;
}

int cmd_convergence(CommonOptions const& common, std::vector<std::uint64_t> const& seeds, GAOverrides const& flags,
                    std::string const& reference_path, std::size_t cap, std::ostream& out)
{
    auto const scenario = load_scenario(common.scenario);
    auto const n = scenario.zone_count();
    RasterFloodEvaluator evaluator;

    ParetoFront reference;
    if (!reference_path.empty()) {
        reference = read_pareto_csv(reference_path);
    } else {
        if (n > cap) {
            throw EnumerationRefused(n, cap);
        }
        ScenarioObjective objective(scenario, evaluator);
        reference = enumerate_all(n, objective.function(), cap, common.jobs).front;
    }

    auto const dir = prepare_out(common.out);
    std::ostringstream table;
    table << "seed,converged_generation,evaluations,repo_fraction,front_size,repository_consistent\n";
    std::ostringstream r;
    r << "zones " << n << '\n' << "reference_front_size " << reference.objective_set().size() << '\n';
    std::size_t converged = 0;
    for (auto seed : seeds) {
        auto const config = resolve_ga(scenario, flags, seed, common.jobs);
        auto const report = convergence_test(scenario, evaluator, config, reference);
        write_history_csv(dir / ("history_seed" + std::to_string(seed) + ".csv"), report.records, true);
        std::string const generation =
            report.converged_generation ? std::to_string(*report.converged_generation) : std::string("not converged");
        table << seed << ',' << generation << ',' << report.evaluations << ','
              << format_double(report.repository_fraction) << ',' << report.front.objective_set().size() << ','
              << (report.repository_consistent ? 1 : 0) << '\n';
        r << "seed " << seed << ": " << generation << ", repository fraction "
          << format_fixed(report.repository_fraction, 6) << '\n';
        converged += report.converged_generation ? 1 : 0;
        out << "seed " << seed << ": " << generation << " (" << format_fixed(report.wall_seconds, 3) << " s)\n";
    }
    r << "converged " << converged << " of " << seeds.size() << '\n';
    write_text(dir / "convergence.csv", table.str());
    write_text(dir / "report.txt", r.str());
    out << "converged " << converged << " of " << seeds.size() << '\n';
    return exit_success;
}

} // namespace

int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Blue-green infrastructure placement: NSGA-II search with an enumeration oracle", "bgiopt"};
    app.require_subcommand(1);

    CommonOptions common;
    GAOverrides ga;
    std::string reference;
    std::string genome;
    std::size_t cap = default_enumeration_cap;
    int factor = 2;
    std::vector<std::uint64_t> seeds;
    SyntheticSpec spec;

    auto* optimize = app.add_subcommand("optimize", "Run the optimizer on a scenario");
    optimize->add_option("--scenario", common.scenario, "Scenario directory")->required()->check(CLI::ExistingDirectory);
    optimize->add_option("--out", common.out, "Output directory")->required();
    optimize->add_option("--seed", common.seed, "Random seed")->required();
    optimize->add_option("--reference", reference, "Oracle pareto.csv; fills history.csv's converged_flag");
    add_ga_flags(optimize, ga);
    add_jobs_flag(optimize, common);

    auto* enumerate = app.add_subcommand("enumerate", "Evaluate every genome and extract the exact front");
    enumerate->add_option("--scenario", common.scenario, "Scenario directory")->required()->check(CLI::ExistingDirectory);
    enumerate->add_option("--out", common.out, "Output directory")->required();
    enumerate->add_option("--cap", cap, "Largest zone count to enumerate")->capture_default_str();
    add_jobs_flag(enumerate, common);

    auto* convergence = app.add_subcommand("convergence", "Per-seed convergence against an oracle front");
    convergence->add_option("--scenario", common.scenario, "Scenario directory")->required()->check(CLI::ExistingDirectory);
    convergence->add_option("--out", common.out, "Output directory")->required();
    convergence->add_option("--seed", seeds, "Seeds, comma separated or repeated")->required()->delimiter(',');
    convergence->add_option("--reference", reference, "Oracle pareto.csv; enumerated inline when absent");
    convergence->add_option("--cap", cap, "Largest zone count to enumerate inline")->capture_default_str();
    add_ga_flags(convergence, ga);
    add_jobs_flag(convergence, common);

    auto* simulate = app.add_subcommand("simulate", "Flood one genome and write its max-depth raster");
    simulate->add_option("--scenario", common.scenario, "Scenario directory")->required()->check(CLI::ExistingDirectory);
    simulate->add_option("--out", common.out, "Output directory")->required();
    simulate->add_option("--genome", genome, "Bit string, zone 1 first")->required();
    add_jobs_flag(simulate, common);

    auto* subdivide = app.add_subcommand("subdivide", "Split every zone into 2 or 4 children");
    subdivide->add_option("--scenario", common.scenario, "Scenario directory")->required()->check(CLI::ExistingDirectory);
    subdivide->add_option("--out", common.out, "Output scenario directory")->required();
    subdivide->add_option("--factor", factor, "2 or 4")->capture_default_str()->check(CLI::IsMember({2, 4}));

    auto* generate = app.add_subcommand("generate", "Write a synthetic scenario");
    generate->add_option("--out", common.out, "Output scenario directory")->required();
    generate->add_option("--seed", common.seed, "Generator seed (default 1)");
    generate->add_option("--rows", spec.rows, "Grid rows")->capture_default_str();
    generate->add_option("--cols", spec.cols, "Grid columns")->capture_default_str();
    generate->add_option("--zone-block-rows", spec.zone_block_rows, "Zone blocks down")->capture_default_str();
    generate->add_option("--zone-block-cols", spec.zone_block_cols, "Zone blocks across")->capture_default_str();
    generate->add_option("--buildings", spec.building_count, "Building count")->capture_default_str();
    generate->add_option("--candidate-fraction", spec.candidate_fraction, "Share of cells in zones")
        ->capture_default_str();
    generate->add_option("--slope", spec.slope, "Plane slope")->capture_default_str();
    generate->add_option("--rain-depth", spec.rain_depth_mm, "Event total in mm")->capture_default_str();
    generate->add_option("--return-period", spec.return_period_years, "Event return period in years")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (optimize->parsed()) {
            return cmd_optimize(common, ga, reference, out);
        }
        if (enumerate->parsed()) {
            return cmd_enumerate(common, cap, out);
        }
        if (convergence->parsed()) {
            return cmd_convergence(common, seeds, ga, reference, cap, out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(common, genome, out, err);
        }
        if (subdivide->parsed()) {
            return cmd_subdivide(common, factor, out);
        }
        return cmd_generate(common, spec, out);
    } catch (EnumerationRefused const& e) {
        err << "refused: " << e.what() << '\n';
        return exit_refused;
    } catch (ParseError const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (InvalidArgument const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (ScenarioError const& e) {
        err << "scenario error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::exception const& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

} // namespace bgi
