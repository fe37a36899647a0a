#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bgi/genome.hpp"
#include "bgi/nsga2.hpp"
#include "bgi/objectives.hpp"
#include "bgi/repository.hpp"
#include "bgi/rng.hpp"

namespace bgi {

struct GAConfig {
    std::size_t population_size = 27;
    std::size_t max_generations = 25;
    double crossover_probability = 1.0;
    double mutation_probability = 0.4;
    std::uint64_t rng_seed = 0;
    std::size_t uniqueness_retry_cap = 50;
    // Concurrent objective evaluations; 0 means hardware concurrency.
    std::size_t jobs = 1;

    void validate() const;
};

// Population size and generation cap used for an n-zone problem when the
// caller does not set them: 27/25 up to 10 zones, 66/50 up to 15, else 100/100.
[[nodiscard]] GAConfig default_config_for_zones(std::size_t n);

// Maps a genome to its objectives. Must be safe to call concurrently on
// distinct genomes.
using ObjectiveFunction = std::function<ObjectiveVector(Genome const&)>;

// Evaluates genomes on up to `jobs` threads; results are in input order.
// Failures are rethrown as EvaluationError carrying the genome.
[[nodiscard]] std::vector<ObjectiveVector> evaluate_batch(std::span<Genome const> genomes,
                                                          ObjectiveFunction const& objective, std::size_t jobs);

// Member 0 is all zeros, member p-1 all ones, the rest distinct random
// genomes. Every genome is inserted into repo at generation 0.
[[nodiscard]] std::vector<Genome> initialize_population(std::size_t n, GAConfig const& config,
                                                        SolutionRepository& repo, Rng& rng);

// Crossover + mutation on one parent pair until the child is absent from repo,
// at most config.uniqueness_retry_cap times. Nothing is inserted.
[[nodiscard]] std::optional<Genome> try_unique_offspring(Genome const& parent_a, Genome const& parent_b,
                                                         SolutionRepository const& repo, GAConfig const& config,
                                                         Rng& rng);

// Uniformly random genome of length n not in repo.
[[nodiscard]] Genome random_unique_genome(std::size_t n, SolutionRepository const& repo, Rng& rng);

using ParentSelector = std::function<std::pair<std::size_t, std::size_t>()>;

// Unique offspring with the retry policy: cap attempts on the given pair,
// then cap attempts on one re-selected pair, then a random unique genome.
// The result is inserted into repo (unevaluated) at `generation`.
Genome make_unique_offspring(Individual const& parent_a, Individual const& parent_b,
                             std::span<Individual const> population, ParentSelector const& reselect,
                             SolutionRepository& repo, GAConfig const& config, Rng& rng, std::size_t generation);

// Elitist merge of parents and offspring into a population of parents.size().
// Rank and crowding of the returned members are those computed on the union.
[[nodiscard]] Population derive_new_generation(std::span<Individual const> parents,
                                               std::span<Individual const> offspring);

struct GenerationRecord {
    std::size_t generation = 0;
    std::vector<ObjectiveVector> front; // distinct rank-0 objective vectors, sorted
    std::size_t repository_size = 0;
};

struct OptimizationResult {
    Population front;      // rank-0 members of the final population
    Population population; // final population
    SolutionRepository repository;
    std::vector<GenerationRecord> history; // one entry per completed generation
    std::size_t evaluations = 0;
    std::size_t generations_run = 0;
    bool search_space_exhausted = false;
    bool stopped_by_observer = false;
};

// Called after the initial evaluation (generation 0) and after every
// generation; returning false ends the run.
using GenerationObserver =
    std::function<bool(std::size_t generation, std::span<Individual const> population, SolutionRepository const&)>;

[[nodiscard]] OptimizationResult run_optimization(std::size_t n, ObjectiveFunction const& objective,
                                                  GAConfig const& config, GenerationObserver const& observer = {});

// Distinct objective vectors of the non-dominated members, sorted.
[[nodiscard]] std::vector<ObjectiveVector> front_objectives(std::span<Individual const> population);

} // namespace bgi
