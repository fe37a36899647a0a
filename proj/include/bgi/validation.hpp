#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bgi/evaluator.hpp"
#include "bgi/genome.hpp"
#include "bgi/objectives.hpp"
#include "bgi/optimizer.hpp"

namespace bgi {

struct ParetoMember {
    Genome genome;
    ObjectiveVector objectives;
    std::optional<std::size_t> generation_found; // optimizer fronts only
};

struct ParetoFront {
    enum class Source { oracle, optimizer };

    Source source = Source::oracle;
    std::vector<ParetoMember> members;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
    [[nodiscard]] bool empty() const noexcept { return members.empty(); }
    // Distinct objective vectors, sorted.
    [[nodiscard]] std::vector<ObjectiveVector> objective_set() const;
    // Pairwise non-domination and no duplicate genome.
    [[nodiscard]] bool is_valid() const;
};

// Indices of the non-dominated points (ties with equal vectors all kept),
// ascending. O(N log N) sweep for two objectives.
[[nodiscard]] std::vector<std::size_t> nondominated_indices(std::span<ObjectiveVector const> objectives);

// Front of an optimizer run, with the generation each genome was first generated.
[[nodiscard]] ParetoFront optimizer_front(OptimizationResult const& result);

struct EnumerationResult {
    std::size_t zones = 0;
    std::vector<ObjectiveVector> objectives; // index = lexicographic genome rank
    ParetoFront front;
    double wall_seconds = 0.0;

    [[nodiscard]] Genome genome(std::size_t index) const { return Genome::from_index(index, zones); }
};

inline constexpr std::size_t default_enumeration_cap = 16;

// Evaluates every genome in lexicographic order and extracts the exact front.
// Throws EnumerationRefused when n > cap.
[[nodiscard]] EnumerationResult enumerate_all(std::size_t n, ObjectiveFunction const& objective,
                                              std::size_t cap = default_enumeration_cap, std::size_t jobs = 1);
[[nodiscard]] EnumerationResult enumerate_all(CatchmentScenario const& scenario, FloodEvaluator const& evaluator,
                                              std::size_t cap = default_enumeration_cap, std::size_t jobs = 1);

struct ConvergenceRecord {
    std::size_t generation = 0;
    std::size_t front_size = 0;       // distinct rank-0 objective vectors
    double repository_fraction = 0.0; // |repo| / 2^n
    bool converged = false;
};

struct ConvergenceReport {
    std::uint64_t seed = 0;
    std::vector<ConvergenceRecord> records; // generation 0 (initial population) onwards
    std::optional<std::size_t> converged_generation;
    std::size_t evaluations = 0;
    double repository_fraction = 0.0;
    double wall_seconds = 0.0;
    ParetoFront front; // rank-0 front when the run ended
    std::size_t repository_size = 0;
    bool repository_consistent = true; // evaluator invocations == repository size, no duplicates
};

// Runs the optimizer and, after every generation, compares the rank-0
// objective-vector set with the reference set. The run stops at the first
// generation where they are equal.
[[nodiscard]] ConvergenceReport convergence_test(std::size_t n, ObjectiveFunction const& objective,
                                                 GAConfig const& config, ParetoFront const& reference);
[[nodiscard]] ConvergenceReport convergence_test(CatchmentScenario const& scenario, FloodEvaluator const& evaluator,
                                                 GAConfig const& config, ParetoFront const& reference);

inline constexpr int contribution_bands = 5;

struct ZoneContribution {
    std::vector<double> fractions; // per zone, share of front members using it
    std::vector<int> bands;        // 0..4 over [0,0.2), [0.2,0.4), [0.4,0.6), [0.6,0.8), [0.8,1]
};

[[nodiscard]] int contribution_band(double fraction);
[[nodiscard]] ZoneContribution zone_contribution(ParetoFront const& front, std::size_t n);

struct EfficiencyReport {
    std::size_t evaluations = 0;
    double search_space = 0.0;
    double fraction = 0.0;
    double wall_seconds = 0.0;
    double mean_evaluation_seconds = 0.0;
    double projected_exhaustive_seconds = 0.0;
    bool enumeration_feasible = true; // projected time within the budget
};

// budget_seconds bounds what counts as a feasible exhaustive enumeration.
[[nodiscard]] EfficiencyReport efficiency_report(std::size_t evaluations, std::size_t n, double wall_seconds,
                                                 double evaluation_seconds, double budget_seconds = 86400.0);
[[nodiscard]] std::string format_efficiency(EfficiencyReport const& report, bool include_timing);

// Return-period contrast: fraction of one front's genomes that become
// dominated by the other event's front when re-evaluated under that event.
struct CrossEvaluation {
    ParetoFront native;       // front under its own event
    ParetoFront reevaluated;  // same genomes, other event
    double dominated_fraction = 0.0;
};
[[nodiscard]] CrossEvaluation cross_evaluate(ParetoFront const& front, ParetoFront const& other_front,
                                             ObjectiveFunction const& other_objective);

// For each risk level on the coarse front that the fine front can reach,
// the cheapest fine solution at equal or lower risk versus the coarse cost.
struct DiscretizationComparison {
    std::size_t matched_levels = 0;
    std::size_t violations = 0;
    std::vector<std::string> lines;
};
[[nodiscard]] DiscretizationComparison compare_discretization(ParetoFront const& coarse, ParetoFront const& fine);

} // namespace bgi
