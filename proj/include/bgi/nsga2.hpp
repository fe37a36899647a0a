#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "bgi/genome.hpp"
#include "bgi/objectives.hpp"

namespace bgi {

inline constexpr double infinite_crowding = std::numeric_limits<double>::infinity();

struct Individual {
    Genome genome;
    ObjectiveVector objectives;
    std::size_t rank = 0;
    double crowding = 0.0;
};

using Population = std::vector<Individual>;
using Fronts = std::vector<std::vector<std::size_t>>;

// Deb's fast non-dominated sort. Front k holds the indices that are
// non-dominated once fronts 0..k-1 are removed; indices inside a front are
// ascending.
[[nodiscard]] Fronts fast_nondominated_sort(std::span<ObjectiveVector const> objectives);

// Sorts the individuals and writes the front index into each rank field.
Fronts fast_nondominated_sort(std::span<Individual> individuals);

// Crowding distance of each member of one front, in the order given.
// Extremes of either objective get +inf; an objective whose range is zero
// contributes nothing, not even the infinite endpoints.
[[nodiscard]] std::vector<double> crowding_distance(std::span<ObjectiveVector const> front);

// Writes crowding distances for the members of front (indices into individuals).
void assign_crowding(std::span<Individual> individuals, std::span<std::size_t const> front);

// Rank and crowding for a whole population.
Fronts assign_fitness(std::span<Individual> individuals);

} // namespace bgi
