#include "bgi/operators.hpp"

#include "bgi/errors.hpp"

namespace bgi {

bool tournament_beats(Individual const& a, Individual const& b) noexcept
{
    if (a.rank != b.rank) {
        return a.rank < b.rank;
    }
    return a.crowding > b.crowding;
}

std::size_t binary_tournament(std::span<Individual const> population, Rng& rng)
{
    auto const size = population.size();
    if (size < 2) {
        throw InvalidArgument("binary_tournament needs at least two members");
    }
    std::size_t const first = rng.below(size);
    std::size_t second = rng.below(size - 1);
    if (second >= first) {
        ++second;
    }
    return tournament_beats(population[second], population[first]) ? second : first;
}

Genome splice(Genome const& parent_a, Genome const& parent_b, std::size_t cut)
{
    if (parent_a.size() != parent_b.size()) {
        throw InvalidArgument("crossover parents differ in length");
    }
    if (cut > parent_a.size()) {
        throw InvalidArgument("crossover cut point beyond genome length");
    }
    Genome child = parent_a;
    for (std::size_t j = cut; j < child.size(); ++j) {
        child.set(j, parent_b[j]);
    }
    return child;
}

Genome single_point_crossover(Genome const& parent_a, Genome const& parent_b, Rng& rng, double probability)
{
    if (parent_a.size() != parent_b.size()) {
        throw InvalidArgument("crossover parents differ in length");
    }
    auto const n = parent_a.size();
    if (n < 2 || !rng.bernoulli(probability)) {
        return parent_a;
    }
    std::size_t const cut = 1 + rng.below(n - 1);
    return splice(parent_a, parent_b, cut);
}

Genome bit_flip_mutation(Genome genome, Rng& rng, double probability)
{
    if (genome.size() == 0 || !rng.bernoulli(probability)) {
        return genome;
    }
    genome.flip(rng.below(genome.size()));
    return genome;
}

} // namespace bgi
