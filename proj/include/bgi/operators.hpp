#pragma once

#include <cstddef>
#include <span>

#include "bgi/genome.hpp"
#include "bgi/nsga2.hpp"
#include "bgi/rng.hpp"

namespace bgi {

// True when a wins a tournament against b: lower rank, then larger crowding.
[[nodiscard]] bool tournament_beats(Individual const& a, Individual const& b) noexcept;

// Draws two distinct members uniformly and returns the index of the winner.
// Full ties go to the first drawn.
[[nodiscard]] std::size_t binary_tournament(std::span<Individual const> population, Rng& rng);

// parent_a[0, cut) followed by parent_b[cut, n).
[[nodiscard]] Genome splice(Genome const& parent_a, Genome const& parent_b, std::size_t cut);

// Random one-point crossover yielding a single child. With probability
// 1 - probability the child is a copy of parent_a.
[[nodiscard]] Genome single_point_crossover(Genome const& parent_a, Genome const& parent_b, Rng& rng,
                                            double probability);

// With the given probability flips exactly one uniformly chosen bit.
[[nodiscard]] Genome bit_flip_mutation(Genome genome, Rng& rng, double probability);

} // namespace bgi
