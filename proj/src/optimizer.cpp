#include "bgi/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "bgi/errors.hpp"
#include "bgi/operators.hpp"

namespace bgi {

void GAConfig::validate() const
{
    if (population_size < 2) {
        throw InvalidArgument("population size must be at least 2");
    }
    if (max_generations < 1) {
        throw InvalidArgument("max_generations must be at least 1");
    }
    if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0)) {
        throw InvalidArgument("crossover probability must lie in [0, 1]");
    }
    if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0)) {
        throw InvalidArgument("mutation probability must lie in [0, 1]");
    }
    if (uniqueness_retry_cap < 1) {
        throw InvalidArgument("uniqueness retry cap must be positive");
    }
}

GAConfig default_config_for_zones(std::size_t n)
{
    GAConfig config;
    if (n <= 10) {
        config.population_size = 27;
        config.max_generations = 25;
    } else if (n <= 15) {
        config.population_size = 66;
        config.max_generations = 50;
    } else {
        config.population_size = 100;
        config.max_generations = 100;
    }
    return config;
}

std::vector<ObjectiveVector> evaluate_batch(std::span<Genome const> genomes, ObjectiveFunction const& objective,
                                            std::size_t jobs)
{
    std::vector<ObjectiveVector> results(genomes.size());
    if (jobs == 0) {
        jobs = std::max(1U, std::thread::hardware_concurrency());
    }
    jobs = std::min(jobs, genomes.size());

    auto evaluate_one = [&](std::size_t i) {
        try {
            results[i] = objective(genomes[i]);
        } catch (EvaluationError const&) {
            throw;
        } catch (std::exception const& e) {
            throw EvaluationError(genomes[i].to_string(), e.what());
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < genomes.size(); ++i) {
            evaluate_one(i);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;
    {
        std::vector<std::jthread> workers;
        workers.reserve(jobs);
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < genomes.size(); i = next++) {
                    try {
                        evaluate_one(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (i < failed_index) {
                            failed_index = i;
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

namespace {

bool exhausted(std::size_t n, std::size_t used)
{
    return n < 64 && used >= (std::uint64_t{1} << n);
}

Genome random_genome(std::size_t n, Rng& rng)
{
    Genome g(n);
    std::uint64_t word = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j % 64 == 0) {
            word = rng.next();
        }
        g.set(j, (word >> (j % 64)) & 1U);
    }
    return g;
}

// Uniform over genomes for which taken() is false; at least one must exist.
template <typename Taken>
Genome random_genome_excluding(std::size_t n, std::size_t taken_count, Taken taken, Rng& rng)
{
    bool const dense = n < 64 && static_cast<double>(taken_count) * 2.0 >= search_space_size(n);
    if (!dense) {
        for (;;) {
            Genome g = random_genome(n, rng);
            if (!taken(g)) {
                return g;
            }
        }
    }
    std::vector<std::uint64_t> free;
    std::uint64_t const total = std::uint64_t{1} << n;
    for (std::uint64_t index = 0; index < total; ++index) {
        if (!taken(Genome::from_index(index, n))) {
            free.push_back(index);
        }
    }
    if (free.empty()) {
        throw SearchSpaceExhausted("all " + std::to_string(total) + " genomes are already in the repository");
    }
    return Genome::from_index(free[rng.below(free.size())], n);
}

} // namespace

std::vector<Genome> initialize_population(std::size_t n, GAConfig const& config, SolutionRepository& repo, Rng& rng)
{
    config.validate();
    auto const p = config.population_size;
    if (n == 0) {
        throw InvalidArgument("genome length must be positive");
    }
    if (n < 64 && p > (std::uint64_t{1} << n)) {
        throw InfeasiblePopulation("population size " + std::to_string(p) + " exceeds the " +
                                   std::to_string(std::uint64_t{1} << n) + " genomes of a " + std::to_string(n) +
                                   "-zone search space");
    }
    if (!repo.empty()) {
        throw InvalidArgument("initialize_population expects an empty repository");
    }

    Genome const baseline(n, false);
    Genome const maximum(n, true);
    std::vector<Genome> members;
    members.reserve(p);
    members.push_back(baseline);
    repo.insert(baseline, 0);
    for (std::size_t k = 1; k + 1 < p; ++k) {
        auto taken = [&](Genome const& g) { return g == maximum || repo.contains(g); };
        members.push_back(random_genome_excluding(n, repo.size() + 1, taken, rng));
        repo.insert(members.back(), 0);
    }
    members.push_back(maximum);
    repo.insert(maximum, 0);
    return members;
}

std::optional<Genome> try_unique_offspring(Genome const& parent_a, Genome const& parent_b,
                                           SolutionRepository const& repo, GAConfig const& config, Rng& rng)
{
    for (std::size_t attempt = 0; attempt < config.uniqueness_retry_cap; ++attempt) {
        Genome child = single_point_crossover(parent_a, parent_b, rng, config.crossover_probability);
        child = bit_flip_mutation(std::move(child), rng, config.mutation_probability);
        if (!repo.contains(child)) {
            return child;
        }
    }
    return std::nullopt;
}

Genome random_unique_genome(std::size_t n, SolutionRepository const& repo, Rng& rng)
{
    if (exhausted(n, repo.size())) {
        throw SearchSpaceExhausted("all " + std::to_string(repo.size()) + " genomes are already in the repository");
    }
    return random_genome_excluding(n, repo.size(), [&](Genome const& g) { return repo.contains(g); }, rng);
}

Genome make_unique_offspring(Individual const& parent_a, Individual const& parent_b,
                             std::span<Individual const> population, ParentSelector const& reselect,
                             SolutionRepository& repo, GAConfig const& config, Rng& rng, std::size_t generation)
{
    auto const n = parent_a.genome.size();
    if (exhausted(n, repo.size())) {
        throw SearchSpaceExhausted("all " + std::to_string(repo.size()) + " genomes are already in the repository");
    }
    auto child = try_unique_offspring(parent_a.genome, parent_b.genome, repo, config, rng);
    if (!child && reselect) {
        auto const [i, j] = reselect();
        child = try_unique_offspring(population[i].genome, population[j].genome, repo, config, rng);
    }
    if (!child) {
        child = random_unique_genome(n, repo, rng);
    }
    repo.insert(*child, generation);
    return *child;
}

Population derive_new_generation(std::span<Individual const> parents, std::span<Individual const> offspring)
{
    auto const p = parents.size();
    Population pool(parents.begin(), parents.end());
    pool.insert(pool.end(), offspring.begin(), offspring.end());
    auto const fronts = assign_fitness(pool);

    Population next;
    next.reserve(p);
    for (auto const& front : fronts) {
        if (next.size() + front.size() <= p) {
            for (auto i : front) {
                next.push_back(pool[i]);
            }
        } else {
            std::vector<std::size_t> order(front.begin(), front.end());
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (pool[a].crowding != pool[b].crowding) {
                    return pool[a].crowding > pool[b].crowding;
                }
                return pool[a].genome < pool[b].genome;
            });
            for (std::size_t k = 0; next.size() < p; ++k) {
                next.push_back(pool[order[k]]);
            }
        }
        if (next.size() == p) {
            break;
        }
    }
    return next;
}

std::vector<ObjectiveVector> front_objectives(std::span<Individual const> population)
{
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(population.size());
    for (auto const& ind : population) {
        objectives.push_back(ind.objectives);
    }
    auto const fronts = fast_nondominated_sort(std::span<ObjectiveVector const>(objectives));
    std::vector<ObjectiveVector> front;
    if (!fronts.empty()) {
        for (auto i : fronts.front()) {
            front.push_back(objectives[i]);
        }
    }
    std::sort(front.begin(), front.end());
    front.erase(std::unique(front.begin(), front.end()), front.end());
    return front;
}

namespace {

Population evaluate_members(std::vector<Genome> const& genomes, ObjectiveFunction const& objective,
                            SolutionRepository& repo, GAConfig const& config, std::size_t& evaluations)
{
    Population members(genomes.size());
    std::vector<Genome> pending;
    std::vector<std::size_t> pending_slot;
    for (std::size_t k = 0; k < genomes.size(); ++k) {
        members[k].genome = genomes[k];
        auto const* entry = repo.find(genomes[k]);
        if (entry != nullptr && entry->objectives) {
            members[k].objectives = *entry->objectives;
        } else {
            pending.push_back(genomes[k]);
            pending_slot.push_back(k);
        }
    }
    auto const results = evaluate_batch(pending, objective, config.jobs);
    evaluations += results.size();
    for (std::size_t k = 0; k < results.size(); ++k) {
        members[pending_slot[k]].objectives = results[k];
        repo.set_objectives(pending[k], results[k]);
    }
    return members;
}

} // namespace

OptimizationResult run_optimization(std::size_t n, ObjectiveFunction const& objective, GAConfig const& config,
                                    GenerationObserver const& observer)
{
    config.validate();
    OptimizationResult result;
    Rng rng(config.rng_seed);
    auto& repo = result.repository;

    auto const initial = initialize_population(n, config, repo, rng);
    Population population = evaluate_members(initial, objective, repo, config, result.evaluations);
    assign_fitness(population);

    bool keep_going = !observer || observer(0, population, repo);
    result.stopped_by_observer = !keep_going;

    for (std::size_t generation = 1; keep_going && generation <= config.max_generations; ++generation) {
        std::size_t wanted = config.population_size;
        if (n < 64) {
            auto const remaining = (std::uint64_t{1} << n) - repo.size();
            wanted = static_cast<std::size_t>(std::min<std::uint64_t>(wanted, remaining));
        }
        if (wanted == 0) {
            result.search_space_exhausted = true;
            break;
        }

        auto select_pair = [&] {
            std::size_t const a = binary_tournament(population, rng);
            std::size_t const b = binary_tournament(population, rng);
            return std::pair{a, b};
        };
        std::vector<Genome> children;
        children.reserve(wanted);
        for (std::size_t k = 0; k < wanted; ++k) {
            auto const [a, b] = select_pair();
            children.push_back(make_unique_offspring(population[a], population[b], population, select_pair, repo,
                                                     config, rng, generation));
        }

        Population offspring = evaluate_members(children, objective, repo, config, result.evaluations);
        population = derive_new_generation(population, offspring);
        result.generations_run = generation;
        result.history.push_back(GenerationRecord{generation, front_objectives(population), repo.size()});

        if (observer && !observer(generation, population, repo)) {
            result.stopped_by_observer = true;
            keep_going = false;
        }
    }

    for (auto const& ind : population) {
        if (ind.rank == 0) {
            result.front.push_back(ind);
        }
    }
    result.population = std::move(population);
    return result;
}

} // namespace bgi
