// End-to-end acceptance run. Prints one PASS/FAIL line per criterion on
// stdout; details go to stderr and to <work>/acceptance_report.txt.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "../unit/oracles.hpp"
#include "bgi/commands.hpp"
#include "bgi/cost_model.hpp"
#include "bgi/errors.hpp"
#include "bgi/evaluator.hpp"
#include "bgi/exposure.hpp"
#include "bgi/flood_simulator.hpp"
#include "bgi/nsga2.hpp"
#include "bgi/optimizer.hpp"
#include "bgi/rng.hpp"
#include "bgi/scenario.hpp"
#include "bgi/validation.hpp"

namespace fs = std::filesystem;
using namespace bgi;

namespace {

std::ofstream report_file;
fs::path report_dir;

void note(std::string const& line)
{
    std::cerr << "  " << line << '\n';
    report_file << "  " << line << '\n';
}

int failures = 0;

void verdict(int criterion, bool pass, std::string const& summary)
{
    std::string const line = std::string(pass ? "PASS" : "FAIL") + " criterion " + std::to_string(criterion) + ": " +
                             summary;
    std::cout << line << std::endl;
    report_file << line << '\n';
    report_file.flush();
    failures += pass ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x, int digits = 3)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << x;
    return s.str();
}

// Wraps an objective and records every genome it is asked to evaluate.
class Audit {
public:
    explicit Audit(ObjectiveFunction inner) : inner_(std::move(inner)) {}

    ObjectiveFunction function()
    {
        return [this](Genome const& g) {
            {
                std::lock_guard lock(mutex_);
                ++calls_;
                if (!seen_.insert(g).second) {
                    ++duplicates_;
                }
            }
            return inner_(g);
        };
    }

    std::size_t calls() const { return calls_; }
    std::size_t duplicates() const { return duplicates_; }

private:
    ObjectiveFunction inner_;
    std::mutex mutex_;
    std::set<Genome> seen_;
    std::size_t calls_ = 0;
    std::size_t duplicates_ = 0;
};

struct RepositoryAudit {
    std::string run;
    std::size_t calls = 0;
    std::size_t repository = 0;
    std::size_t duplicates = 0;
    bool self_reported = true;
};

std::vector<RepositoryAudit> audits;

struct SeedSweep {
    std::size_t recovered = 0;
    std::size_t within_budget = 0;
    std::size_t passing = 0;
};

SeedSweep sweep_seeds(std::string const& label, std::size_t n, ScenarioObjective const& objective,
                      ParetoFront const& reference, std::size_t jobs, double repo_limit)
{
    SeedSweep out;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto config = default_config_for_zones(n);
        config.rng_seed = seed;
        config.jobs = jobs;
        Audit audit(objective.function());
        auto const start = std::chrono::steady_clock::now();
        auto const r = convergence_test(n, audit.function(), config, reference);
        bool const recovered = r.converged_generation.has_value() &&
                               r.front.objective_set() == reference.objective_set();
        bool const small = r.repository_fraction < repo_limit;
        out.recovered += recovered ? 1 : 0;
        out.within_budget += small ? 1 : 0;
        out.passing += recovered && small ? 1 : 0;
        audits.push_back({label + " seed " + std::to_string(seed), audit.calls(), r.repository_size,
                          audit.duplicates(), r.repository_consistent});
        note(label + " seed " + std::to_string(seed) + ": " +
             (r.converged_generation ? "converged at generation " + std::to_string(*r.converged_generation)
                                     : std::string("not converged")) +
             ", repository " + std::to_string(r.repository_size) + " (" + fmt(100.0 * r.repository_fraction, 1) +
             "%), " + fmt(seconds_since(start), 2) + " s");
    }
    return out;
}

std::size_t hardware_jobs()
{
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// --- criteria ---------------------------------------------------------------

struct Shared {
    CatchmentScenario s10;
    ParetoFront oracle10;
};

void criterion_1(Shared& shared, RasterFloodEvaluator const& evaluator, std::size_t jobs)
{
    shared.s10 = generate_synthetic_catchment(SyntheticSpec{});
    ScenarioObjective objective(shared.s10, evaluator);
    auto const start = std::chrono::steady_clock::now();
    auto const e = enumerate_all(10, objective.function(), default_enumeration_cap, jobs);
    shared.oracle10 = e.front;
    note("10-zone enumeration: " + std::to_string(e.objectives.size()) + " genomes, front of " +
         std::to_string(e.front.objective_set().size()) + " vectors, " + fmt(seconds_since(start), 1) + " s");

    auto const config = default_config_for_zones(10);
    bool const table = config.population_size == 27 && config.max_generations == 25 &&
                       config.crossover_probability == 1.0 && config.mutation_probability == 0.4;
    auto const sweep = sweep_seeds("10 zones", 10, objective, e.front, jobs, 0.40);
    verdict(1, table && sweep.passing >= 8,
            std::to_string(sweep.passing) + "/10 seeds recover the 10-zone oracle front with repository < 40%");
}

void criterion_2(RasterFloodEvaluator const& evaluator, std::size_t jobs)
{
    auto const r10 = efficiency_report(0, 10, 0.0, 0.0);
    auto const r15 = efficiency_report(0, 15, 0.0, 0.0);
    bool const counts = format_efficiency(r10, false).find("search_space 1024\n") != std::string::npos &&
                        format_efficiency(r15, false).find("search_space 32768\n") != std::string::npos;

    SyntheticSpec spec;
    spec.zone_block_rows = 3;
    spec.zone_block_cols = 5;
    auto const s15 = generate_synthetic_catchment(spec);
    ScenarioObjective objective(s15, evaluator);
    auto const start = std::chrono::steady_clock::now();
    auto const e = enumerate_all(15, objective.function(), default_enumeration_cap, jobs);
    bool const complete = e.objectives.size() == 32768;
    note("15-zone enumeration: " + std::to_string(e.objectives.size()) + " genomes, front of " +
         std::to_string(e.front.objective_set().size()) + " vectors, " + fmt(seconds_since(start), 1) + " s");

    auto const config = default_config_for_zones(15);
    bool const table = config.population_size == 66 && config.max_generations == 50;
    auto const sweep = sweep_seeds("15 zones", 15, objective, e.front, jobs, 1.0);
    verdict(2, counts && complete && table && sweep.recovered >= 7,
            std::string("search spaces 1024 and 32768") + (counts ? "" : " NOT reported") +
                ", 15-zone enumeration " + (complete ? "complete" : "incomplete") + ", " +
                std::to_string(sweep.recovered) + "/10 seeds recover the 15-zone front");
}

void criterion_3()
{
    Rng rng(20240603);
    std::size_t sort_failures = 0;
    std::size_t endpoint_failures = 0;
    std::size_t elitism_failures = 0;
    int const sets = 250;
    for (int trial = 0; trial < sets; ++trial) {
        auto const size = 1 + rng.below(100);
        int const spread = 3 + static_cast<int>(rng.below(40));
        std::vector<ObjectiveVector> v(size);
        for (auto& o : v) {
            o = {static_cast<double>(rng.below(static_cast<std::size_t>(spread))) * 0.5,
                 static_cast<std::int64_t>(rng.below(static_cast<std::size_t>(spread)))};
        }
        auto const fronts = fast_nondominated_sort(std::span<ObjectiveVector const>(v));
        if (fronts != oracle::peel(v)) {
            ++sort_failures;
        }

        for (auto const& front : fronts) {
            std::vector<ObjectiveVector> members;
            for (auto i : front) {
                members.push_back(v[i]);
            }
            auto const d = crowding_distance(members);
            auto check = [&](auto get) {
                auto const [lo, hi] = std::minmax_element(members.begin(), members.end(),
                                                          [&](auto const& a, auto const& b) { return get(a) < get(b); });
                if (get(*lo) == get(*hi)) {
                    return; // zero range contributes nothing
                }
                for (std::size_t k = 0; k < members.size(); ++k) {
                    bool const extreme = get(members[k]) == get(*lo) || get(members[k]) == get(*hi);
                    if (extreme && d[k] != infinite_crowding) {
                        ++endpoint_failures;
                    }
                }
            };
            check([](ObjectiveVector const& o) { return o.cost; });
            check([](ObjectiveVector const& o) { return static_cast<double>(o.risk); });
        }

        // elitism: split into parents and offspring with distinct genomes
        if (size >= 4) {
            std::size_t const p = size / 2;
            std::vector<Individual> parents;
            std::vector<Individual> offspring;
            for (std::size_t k = 0; k < 2 * p; ++k) {
                Individual ind{Genome::from_index(k, 8), v[k], 0, 0.0};
                (k < p ? parents : offspring).push_back(ind);
            }
            auto const next = derive_new_generation(parents, offspring);
            std::set<Genome> kept;
            for (auto const& ind : next) {
                kept.insert(ind.genome);
            }
            if (next.size() != p) {
                ++elitism_failures;
            }
            for (auto const* pool : {&parents, &offspring}) {
                for (auto const& lost : *pool) {
                    if (kept.contains(lost.genome)) {
                        continue;
                    }
                    for (auto const& survivor : next) {
                        if (dominates(lost.objectives, survivor.objectives)) {
                            ++elitism_failures;
                        }
                    }
                }
            }
        }
    }
    note(std::to_string(sets) + " random sets: sort mismatches " + std::to_string(sort_failures) +
         ", endpoint failures " + std::to_string(endpoint_failures) + ", elitism failures " +
         std::to_string(elitism_failures));
    verdict(3, sort_failures + endpoint_failures + elitism_failures == 0,
            std::to_string(sets) + " random sets, " +
                std::to_string(sort_failures + endpoint_failures + elitism_failures) + " failures");
}

void criterion_4()
{
    std::size_t violations = 0;
    for (auto const& a : audits) {
        bool const ok = a.calls == a.repository && a.duplicates == 0 && a.self_reported;
        if (!ok) {
            ++violations;
            note(a.run + ": " + std::to_string(a.calls) + " evaluations, repository " + std::to_string(a.repository) +
                 ", duplicates " + std::to_string(a.duplicates));
        }
    }
    verdict(4, !audits.empty() && violations == 0,
            std::to_string(audits.size()) + " optimizer runs audited, " + std::to_string(violations) + " violations");
}

void criterion_5()
{
    double const fv = future_value(100.0, 0.029, 40);
    double oracle = 100.0;
    for (int y = 0; y < 40; ++y) {
        oracle *= 1.029;
    }
    bool const literal = std::abs(fv - 313.87) <= 0.01;
    bool const matches_oracle = std::abs(fv - oracle) <= 1e-9;
    note("future_value(100, 0.029, 40) = " + fmt(fv, 6) + ", iterated multiplication " + fmt(oracle, 6) +
         ", stated value 313.87");

    auto const s = generate_synthetic_catchment(SyntheticSpec{});
    Rng rng(5);
    std::size_t violations = 0;
    for (int k = 0; k < 1000; ++k) {
        auto const a = Genome::from_index(rng.below(1024), 10);
        auto const b = Genome::from_index(rng.below(1024), 10);
        Genome both(10);
        Genome either(10);
        for (std::size_t j = 0; j < 10; ++j) {
            both.set(j, a[j] && b[j]);
            either.set(j, a[j] || b[j]);
        }
        double const ca = solution_cost(a, s.costs);
        double const cb = solution_cost(b, s.costs);
        // exact inclusion-exclusion
        if (solution_cost(either, s.costs) + solution_cost(both, s.costs) != ca + cb) {
            ++violations;
        }
        // a subset of a costs no more than a
        if (solution_cost(both, s.costs) > ca || ca > solution_cost(either, s.costs)) {
            ++violations;
        }
    }
    note("1000 genome pairs: " + std::to_string(violations) + " additivity/monotonicity violations");
    verdict(5, literal && matches_oracle && violations == 0,
            std::string("future_value = ") + fmt(fv, 4) + (literal ? " within" : " NOT within") +
                " 313.87 +/- 0.01" + (matches_oracle ? " (equals the iterated-multiplication oracle)" : "") + ", " +
                std::to_string(violations) + " cost-property violations");
}

void criterion_6()
{
    Rng rng(66);
    std::size_t violations = 0;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        SyntheticSpec spec;
        spec.seed = rng.next();
        spec.slope = 0.08 * rng.uniform();
        spec.rain_depth_mm = 5.0 + 70.0 * rng.uniform();
        spec.noise_amplitude = 2.0 * rng.uniform();
        spec.sim.routing_coefficient = 0.1 + 0.8 * rng.uniform();
        spec.sim.open_boundary = rng.bernoulli(0.5);
        auto const s = generate_synthetic_catchment(spec);
        auto const genome = Genome::from_index(rng.below(1024), 10);
        auto const r = simulate_event(s.grid, activation_mask(s, genome), s.rain, s.sim);
        worst = std::max(worst, r.mass_balance_error());
        if (!(r.mass_balance_error() <= 1e-6) || r.min_depth < 0.0 || r.final_depth.minCoeff() < 0.0) {
            ++violations;
        }
    }
    std::ostringstream w;
    w << std::scientific << std::setprecision(2) << worst;
    note("100 scenarios: worst relative mass-balance error " + w.str());
    verdict(6, violations == 0, "100 random scenarios, " + std::to_string(violations) + " violations");
}

void criterion_7()
{
    auto const s = generate_synthetic_catchment(SyntheticSpec{});
    auto const m = static_cast<int>(s.buildings.size());
    Rng rng(77);
    std::size_t violations = 0;
    for (int k = 0; k < 100; ++k) {
        ExposureCriteria c = s.criteria;
        c.aggregation = rng.bernoulli(0.5) ? Aggregation::any_cell_max : Aggregation::mean_over_buffer;
        c.buffer_radius = 1 + static_cast<int>(rng.below(3));
        c.depth_threshold = 0.02 + 0.2 * rng.uniform();
        FloodResult r;
        r.max_depth = Raster<double>::Zero(s.grid.rows(), s.grid.cols());
        double const scale = 0.3 * rng.uniform();
        for (Eigen::Index i = 0; i < r.max_depth.size(); ++i) {
            r.max_depth.data()[i] = rng.bernoulli(0.3) ? scale * rng.uniform() : 0.0;
        }
        r.final_depth = r.max_depth;
        auto const before = count_exposed(s.buildings, s.grid, r, c).exposed;
        auto deeper = r;
        for (Eigen::Index i = 0; i < deeper.max_depth.size(); ++i) {
            if (rng.bernoulli(0.5)) {
                deeper.max_depth.data()[i] += 0.1 * rng.uniform();
            }
        }
        auto const after = count_exposed(s.buildings, s.grid, deeper, c).exposed;
        if (after < before || before < 0 || after > m) {
            ++violations;
        }
    }
    verdict(7, violations == 0, "100 random flood results, " + std::to_string(violations) + " violations");
}

void criterion_8(RasterFloodEvaluator const& evaluator, std::size_t jobs)
{
    SyntheticSpec mild_spec;
    mild_spec.rain_depth_mm = rain_depth_30yr_mm;
    mild_spec.return_period_years = 30.0;
    SyntheticSpec severe_spec;
    severe_spec.rain_depth_mm = rain_depth_100yr_mm;
    auto const mild = generate_synthetic_catchment(mild_spec);
    auto const severe = generate_synthetic_catchment(severe_spec);
    ScenarioObjective mild_objective(mild, evaluator);
    ScenarioObjective severe_objective(severe, evaluator);

    auto config = default_config_for_zones(10);
    config.rng_seed = 1;
    config.jobs = jobs;
    auto const mild_front = optimizer_front(run_optimization(mild, evaluator, config));
    auto const severe_front = optimizer_front(run_optimization(severe, evaluator, config));

    auto self_consistent = [](ParetoFront const& f, ScenarioObjective const& objective) {
        if (f.empty() || !f.is_valid()) {
            return false;
        }
        return std::all_of(f.members.begin(), f.members.end(),
                           [&](ParetoMember const& m) { return objective(m.genome) == m.objectives; });
    };
    bool const consistent = self_consistent(mild_front, mild_objective) &&
                            self_consistent(severe_front, severe_objective);

    auto const mild_under_severe = cross_evaluate(mild_front, severe_front, severe_objective.function());
    auto const severe_under_mild = cross_evaluate(severe_front, mild_front, mild_objective.function());
    std::ostringstream text;
    text << "21.9 mm front: " << mild_front.size() << " members; under 31.1 mm, "
         << fmt(100.0 * mild_under_severe.dominated_fraction, 1) << "% dominated by the 31.1 mm front\n"
         << "31.1 mm front: " << severe_front.size() << " members; under 21.9 mm, "
         << fmt(100.0 * severe_under_mild.dominated_fraction, 1) << "% dominated by the 21.9 mm front\n";
    std::ofstream(report_dir / "return_period_contrast.txt") << text.str();
    std::istringstream lines(text.str());
    for (std::string line; std::getline(lines, line);) {
        note(line);
    }
    verdict(8, consistent,
            std::string("cross-evaluation report written; fronts ") +
                (consistent ? "self-consistent" : "NOT self-consistent") + " under their own events");
}

void criterion_9(Shared const& shared, RasterFloodEvaluator const& evaluator, std::size_t jobs)
{
    auto const s20 = subdivide_scenario(shared.s10, 2);
    auto const s40 = subdivide_scenario(s20, 2);

    ScenarioObjective o20(s20, evaluator);
    auto start = std::chrono::steady_clock::now();
    auto const e20 = enumerate_all(20, o20.function(), 20, jobs);
    note("20-zone enumeration (cap raised to 20): front of " + std::to_string(e20.front.objective_set().size()) +
         " vectors, " + fmt(seconds_since(start), 0) + " s");

    ScenarioObjective o40(s40, evaluator);
    start = std::chrono::steady_clock::now();
    std::vector<ParetoMember> pooled;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto config = default_config_for_zones(40);
        config.rng_seed = seed;
        config.jobs = jobs;
        auto const f = optimizer_front(run_optimization(40, o40.function(), config));
        pooled.insert(pooled.end(), f.members.begin(), f.members.end());
    }
    std::vector<ObjectiveVector> objectives;
    for (auto const& m : pooled) {
        objectives.push_back(m.objectives);
    }
    ParetoFront best40;
    best40.source = ParetoFront::Source::optimizer;
    for (auto i : nondominated_indices(objectives)) {
        best40.members.push_back(pooled[i]);
    }
    note("40 zones: best-of-10-seed GA front of " + std::to_string(best40.objective_set().size()) + " vectors, " +
         fmt(seconds_since(start), 0) + " s");

    std::size_t violations = 0;
    std::size_t matched = 0;
    using Pair = std::tuple<char const*, ParetoFront const*, ParetoFront const*>;
    for (auto const& [label, coarse, fine] : {Pair{"10 -> 20", &shared.oracle10, &e20.front},
                                              Pair{"20 -> 40", &e20.front, &best40},
                                              Pair{"10 -> 40", &shared.oracle10, &best40}}) {
        auto const c = compare_discretization(*coarse, *fine);
        violations += c.violations;
        matched += c.matched_levels;
        note(std::string(label) + ": " + std::to_string(c.matched_levels) + " matched risk levels, " +
             std::to_string(c.violations) + " violations");
        for (auto const& line : c.lines) {
            note("  " + line);
        }
    }
    verdict(9, violations == 0 && matched > 0,
            std::to_string(matched) + " matched risk levels across 10/20/40 zones, " + std::to_string(violations) +
                " violations");
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void criterion_10(fs::path const& work)
{
    auto const root = work / "determinism";
    fs::remove_all(root);
    auto cli = [](std::vector<std::string> args) {
        args.insert(args.begin(), "bgiopt");
        std::vector<char const*> argv;
        for (auto const& a : args) {
            argv.push_back(a.c_str());
        }
        std::ostringstream out;
        std::ostringstream err;
        return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    };
    auto const input = root / "input";
    int rc = cli({"generate", "--out", input.string(), "--seed", "1"});
    for (std::string const run : {"a", "b"}) {
        auto const dir = root / run;
        rc |= cli({"generate", "--out", (dir / "generate").string(), "--seed", "9"});
        rc |= cli({"optimize", "--scenario", input.string(), "--out", (dir / "optimize").string(), "--seed", "4"});
        rc |= cli({"enumerate", "--scenario", input.string(), "--out", (dir / "enumerate").string()});
        rc |= cli({"convergence", "--scenario", input.string(), "--out", (dir / "convergence").string(), "--seed",
                   "1,2,3", "--reference", (root / "a" / "enumerate" / "pareto.csv").string()});
        rc |= cli({"simulate", "--scenario", input.string(), "--out", (dir / "simulate").string(), "--genome",
                   "1010101010"});
        rc |= cli({"subdivide", "--scenario", input.string(), "--out", (dir / "subdivide").string(), "--factor",
                   "4"});
    }
    std::size_t files = 0;
    std::size_t diffs = 0;
    for (auto const& entry : fs::recursive_directory_iterator(root / "a")) {
        if (!entry.is_regular_file()) {
            continue;
        }
        ++files;
        auto const twin = root / "b" / fs::relative(entry.path(), root / "a");
        if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) {
            ++diffs;
            note("differs: " + fs::relative(entry.path(), root).string());
        }
    }
    for (auto const& entry : fs::recursive_directory_iterator(root / "b")) {
        if (entry.is_regular_file() && !fs::exists(root / "a" / fs::relative(entry.path(), root / "b"))) {
            ++diffs;
        }
    }
    verdict(10, rc == 0 && files > 0 && diffs == 0,
            std::to_string(files) + " output files compared across two runs, " + std::to_string(diffs) + " diffs" +
                (rc == 0 ? "" : ", a subcommand failed"));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance run"};
    fs::path work = "acceptance_work";
    std::size_t jobs = 0;
    app.add_option("--work", work, "Scratch directory");
    app.add_option("--jobs", jobs, "Concurrent evaluations (0 = all cores)");
    CLI11_PARSE(app, argc, argv);
    if (jobs == 0) {
        jobs = hardware_jobs();
    }

    fs::create_directories(work);
    report_dir = work;
    report_file.open(work / "acceptance_report.txt");

    try {
        RasterFloodEvaluator const evaluator;
        Shared shared;
        auto const start = std::chrono::steady_clock::now();
        criterion_1(shared, evaluator, jobs);
        criterion_2(evaluator, jobs);
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8(evaluator, jobs);
        criterion_9(shared, evaluator, jobs);
        criterion_10(work);
        note("total " + fmt(seconds_since(start), 0) + " s");
    } catch (std::exception const& e) {
        std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
