#include "bgi/nsga2.hpp"

#include <algorithm>
#include <numeric>

namespace bgi {

Fronts fast_nondominated_sort(std::span<ObjectiveVector const> objectives)
{
    auto const n = objectives.size();
    Fronts fronts;
    if (n == 0) {
        return fronts;
    }

    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::size_t> current;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objectives[i], objectives[j])) {
                dominated[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(objectives[j], objectives[i])) {
                dominated[j].push_back(i);
                ++domination_count[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }

    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            for (auto j : dominated[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(current.begin(), current.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

Fronts fast_nondominated_sort(std::span<Individual> individuals)
{
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(individuals.size());
    for (auto const& ind : individuals) {
        objectives.push_back(ind.objectives);
    }
    auto fronts = fast_nondominated_sort(std::span<ObjectiveVector const>(objectives));
    for (std::size_t rank = 0; rank < fronts.size(); ++rank) {
        for (auto i : fronts[rank]) {
            individuals[i].rank = rank;
        }
    }
    return fronts;
}

std::vector<double> crowding_distance(std::span<ObjectiveVector const> front)
{
    auto const m = front.size();
    std::vector<double> distance(m, 0.0);
    if (m <= 2) {
        std::fill(distance.begin(), distance.end(), infinite_crowding);
        return distance;
    }

    std::vector<std::size_t> order(m);
    auto accumulate = [&](auto value) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value(front[a]) < value(front[b]); });
        double const lo = value(front[order.front()]);
        double const hi = value(front[order.back()]);
        double const range = hi - lo;
        if (range == 0.0) {
            return;
        }
        for (std::size_t k = 0; k < m; ++k) {
            double const v = value(front[order[k]]);
            if (v == lo || v == hi) {
                distance[order[k]] = infinite_crowding;
            }
        }
        for (std::size_t k = 1; k + 1 < m; ++k) {
            distance[order[k]] += (value(front[order[k + 1]]) - value(front[order[k - 1]])) / range;
        }
    };
    accumulate([](ObjectiveVector const& o) { return o.cost; });
    accumulate([](ObjectiveVector const& o) { return static_cast<double>(o.risk); });
    return distance;
}

void assign_crowding(std::span<Individual> individuals, std::span<std::size_t const> front)
{
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(front.size());
    for (auto i : front) {
        objectives.push_back(individuals[i].objectives);
    }
    auto const distance = crowding_distance(objectives);
    for (std::size_t k = 0; k < front.size(); ++k) {
        individuals[front[k]].crowding = distance[k];
    }
}

Fronts assign_fitness(std::span<Individual> individuals)
{
    auto fronts = fast_nondominated_sort(individuals);
    for (auto const& front : fronts) {
        assign_crowding(individuals, front);
    }
    return fronts;
}

} // namespace bgi
