#include "bgi/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "bgi/errors.hpp"
#include "bgi/raster.hpp"

namespace bgi {

namespace {
double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}
} // namespace

std::vector<ObjectiveVector> ParetoFront::objective_set() const
{
    std::vector<ObjectiveVector> set;
    for (auto const& m : members) {
        set.push_back(m.objectives);
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

bool ParetoFront::is_valid() const
{
    std::unordered_set<Genome, GenomeHash> seen;
    for (auto const& m : members) {
        if (!seen.insert(m.genome).second) {
            return false;
        }
    }
    for (auto const& a : members) {
        for (auto const& b : members) {
            if (dominates(a.objectives, b.objectives)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::size_t> nondominated_indices(std::span<ObjectiveVector const> objectives)
{
    std::vector<std::size_t> order(objectives.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(objectives[a], a) < std::pair(objectives[b], b);
    });

    std::vector<std::size_t> keep;
    // Lowest risk among strictly cheaper points seen so far.
    auto best_cheaper = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 0; k < order.size();) {
        double const cost = objectives[order[k]].cost;
        std::size_t end = k;
        while (end < order.size() && objectives[order[end]].cost == cost) {
            ++end;
        }
        // Within an equal-cost group, sorted by risk: only the minimal risk survives.
        auto const group_min = objectives[order[k]].risk;
        if (group_min < best_cheaper) {
            for (std::size_t m = k; m < end && objectives[order[m]].risk == group_min; ++m) {
                keep.push_back(order[m]);
            }
            best_cheaper = group_min;
        }
        k = end;
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

ParetoFront optimizer_front(OptimizationResult const& result)
{
    ParetoFront front;
    front.source = ParetoFront::Source::optimizer;
    for (auto const& ind : result.front) {
        auto const* entry = result.repository.find(ind.genome);
        front.members.push_back(ParetoMember{ind.genome, ind.objectives,
                                             entry != nullptr ? std::optional(entry->generation) : std::nullopt});
    }
    std::sort(front.members.begin(), front.members.end(), [](auto const& a, auto const& b) {
        return std::pair(a.objectives, a.genome) < std::pair(b.objectives, b.genome);
    });
    return front;
}

EnumerationResult enumerate_all(std::size_t n, ObjectiveFunction const& objective, std::size_t cap, std::size_t jobs)
{
    if (n == 0) {
        throw InvalidArgument("cannot enumerate a zero-zone search space");
    }
    if (n > cap || n >= 63) {
        throw EnumerationRefused(n, cap);
    }
    auto const start = std::chrono::steady_clock::now();
    EnumerationResult result;
    result.zones = n;
    std::uint64_t const total = std::uint64_t{1} << n;
    result.objectives.reserve(total);

    constexpr std::uint64_t chunk = 4096;
    std::vector<Genome> batch;
    for (std::uint64_t first = 0; first < total; first += chunk) {
        batch.clear();
        for (std::uint64_t index = first; index < std::min(total, first + chunk); ++index) {
            batch.push_back(Genome::from_index(index, n));
        }
        auto const values = evaluate_batch(batch, objective, jobs);
        result.objectives.insert(result.objectives.end(), values.begin(), values.end());
    }

    result.front.source = ParetoFront::Source::oracle;
    for (auto index : nondominated_indices(result.objectives)) {
        result.front.members.push_back(ParetoMember{result.genome(index), result.objectives[index], std::nullopt});
    }
    result.wall_seconds = seconds_since(start);
    return result;
}

EnumerationResult enumerate_all(CatchmentScenario const& scenario, FloodEvaluator const& evaluator, std::size_t cap,
                                std::size_t jobs)
{
    if (scenario.zone_count() > cap) {
        throw EnumerationRefused(scenario.zone_count(), cap);
    }
    ScenarioObjective objective(scenario, evaluator);
    return enumerate_all(scenario.zone_count(), objective.function(), cap, jobs);
}

ConvergenceReport convergence_test(std::size_t n, ObjectiveFunction const& objective, GAConfig const& config,
                                   ParetoFront const& reference)
{
    for (auto const& m : reference.members) {
        if (m.genome.size() != n) {
            throw InvalidArgument("reference front is for " + std::to_string(m.genome.size()) +
                                  " zones, the scenario has " + std::to_string(n));
        }
    }
    auto const target = reference.objective_set();
    auto const space = search_space_size(n);
    auto const start = std::chrono::steady_clock::now();

    std::atomic<std::size_t> calls{0};
    ObjectiveFunction counted = [&](Genome const& g) {
        ++calls;
        return objective(g);
    };

    ConvergenceReport report;
    report.seed = config.rng_seed;
    auto observer = [&](std::size_t generation, std::span<Individual const> population,
                        SolutionRepository const& repo) {
        bool const converged = front_objectives(population) == target;
        report.records.push_back(ConvergenceRecord{generation, front_objectives(population).size(),
                                                   static_cast<double>(repo.size()) / space, converged});
        if (converged && !report.converged_generation) {
            report.converged_generation = generation;
        }
        return !converged;
    };
    auto const result = run_optimization(n, counted, config, observer);

    report.evaluations = result.evaluations;
    report.repository_size = result.repository.size();
    report.repository_fraction = static_cast<double>(result.repository.size()) / space;
    report.front = optimizer_front(result);
    report.wall_seconds = seconds_since(start);

    std::unordered_set<Genome, GenomeHash> distinct;
    for (auto const& e : result.repository.entries()) {
        distinct.insert(e.genome);
    }
    report.repository_consistent = calls.load() == result.repository.size() && distinct.size() == calls.load() &&
                                   result.evaluations == calls.load();
    return report;
}

ConvergenceReport convergence_test(CatchmentScenario const& scenario, FloodEvaluator const& evaluator,
                                   GAConfig const& config, ParetoFront const& reference)
{
    ScenarioObjective objective(scenario, evaluator);
    return convergence_test(scenario.zone_count(), objective.function(), config, reference);
}

int contribution_band(double fraction)
{
    return std::clamp(static_cast<int>(std::floor(fraction * contribution_bands)), 0, contribution_bands - 1);
}

ZoneContribution zone_contribution(ParetoFront const& front, std::size_t n)
{
    if (front.empty()) {
        throw InvalidArgument("zone contribution needs a non-empty front");
    }
    ZoneContribution out;
    out.fractions.assign(n, 0.0);
    for (auto const& m : front.members) {
        if (m.genome.size() != n) {
            throw InvalidArgument("front member length does not match the zone count");
        }
        for (std::size_t j = 0; j < n; ++j) {
            out.fractions[j] += m.genome[j] ? 1.0 : 0.0;
        }
    }
    for (auto& f : out.fractions) {
        f /= static_cast<double>(front.size());
        out.bands.push_back(contribution_band(f));
    }
    return out;
}

EfficiencyReport efficiency_report(std::size_t evaluations, std::size_t n, double wall_seconds,
                                   double evaluation_seconds, double budget_seconds)
{
    EfficiencyReport r;
    r.evaluations = evaluations;
    r.search_space = search_space_size(n);
    r.fraction = static_cast<double>(evaluations) / r.search_space;
    r.wall_seconds = wall_seconds;
    r.mean_evaluation_seconds = evaluations > 0 ? evaluation_seconds / static_cast<double>(evaluations) : 0.0;
    r.projected_exhaustive_seconds = r.mean_evaluation_seconds * r.search_space;
    r.enumeration_feasible = r.projected_exhaustive_seconds <= budget_seconds;
    return r;
}

std::string format_efficiency(EfficiencyReport const& r, bool include_timing)
{
    std::ostringstream out;
    out << "evaluations " << r.evaluations << '\n';
    if (r.search_space < 9007199254740992.0) {
        out << "search_space " << static_cast<std::uint64_t>(r.search_space) << '\n';
    } else {
        out << "search_space " << format_double(r.search_space) << '\n';
    }
    out << "fraction " << format_fixed(r.fraction, 6) << '\n';
    if (include_timing) {
        out << "wall_seconds " << format_fixed(r.wall_seconds, 3) << '\n'
            << "mean_evaluation_seconds " << format_fixed(r.mean_evaluation_seconds, 6) << '\n'
            << "projected_exhaustive_seconds " << format_double(r.projected_exhaustive_seconds) << '\n'
            << "enumeration_feasible " << (r.enumeration_feasible ? "yes" : "no") << '\n';
    }
    return out.str();
}

CrossEvaluation cross_evaluate(ParetoFront const& front, ParetoFront const& other_front,
                               ObjectiveFunction const& other_objective)
{
    CrossEvaluation out;
    out.native = front;
    out.reevaluated.source = front.source;
    std::size_t dominated = 0;
    for (auto const& m : front.members) {
        auto const objectives = other_objective(m.genome);
        out.reevaluated.members.push_back(ParetoMember{m.genome, objectives, m.generation_found});
        bool const beaten = std::any_of(other_front.members.begin(), other_front.members.end(),
                                        [&](ParetoMember const& o) { return dominates(o.objectives, objectives); });
        dominated += beaten ? 1 : 0;
    }
    out.dominated_fraction = front.empty() ? 0.0 : static_cast<double>(dominated) / static_cast<double>(front.size());
    return out;
}

DiscretizationComparison compare_discretization(ParetoFront const& coarse, ParetoFront const& fine)
{
    DiscretizationComparison out;
    auto const fine_set = fine.objective_set();
    if (fine_set.empty()) {
        return out;
    }
    std::int64_t fine_min_risk = fine_set.front().risk;
    for (auto const& o : fine_set) {
        fine_min_risk = std::min(fine_min_risk, o.risk);
    }
    for (auto const& level : coarse.objective_set()) {
        if (level.risk < fine_min_risk) {
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (auto const& o : fine_set) {
            if (o.risk <= level.risk) {
                best = std::min(best, o.cost);
            }
        }
        ++out.matched_levels;
        bool const ok = best <= level.cost;
        if (!ok) {
            ++out.violations;
        }
        out.lines.push_back("risk " + std::to_string(level.risk) + ": coarse " + format_double(level.cost) +
                            ", fine " + format_double(best) + (ok ? "" : "  VIOLATION"));
    }
    return out;
}

} // namespace bgi
