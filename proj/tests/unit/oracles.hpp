#pragma once

// Slow reference implementations used to cross-check the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "bgi/objectives.hpp"

namespace oracle {

inline bool beats(bgi::ObjectiveVector const& a, bgi::ObjectiveVector const& b)
{
    bool const no_worse = a.cost <= b.cost && a.risk <= b.risk;
    bool const better = a.cost < b.cost || a.risk < b.risk;
    return no_worse && better;
}

// Repeatedly strips the members nobody remaining dominates.
inline std::vector<std::vector<std::size_t>> peel(std::vector<bgi::ObjectiveVector> const& v)
{
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<bool> removed(v.size(), false);
    std::size_t left = v.size();
    while (left > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (removed[i]) {
                continue;
            }
            bool beaten = false;
            for (std::size_t j = 0; j < v.size() && !beaten; ++j) {
                beaten = !removed[j] && beats(v[j], v[i]);
            }
            if (!beaten) {
                front.push_back(i);
            }
        }
        for (auto i : front) {
            removed[i] = true;
        }
        left -= front.size();
        fronts.push_back(front);
    }
    return fronts;
}

// Crowding for a front whose values are distinct in each objective.
inline std::vector<double> crowding(std::vector<bgi::ObjectiveVector> const& f)
{
    auto const inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(f.size(), 0.0);
    if (f.size() <= 2) {
        return std::vector<double>(f.size(), inf);
    }
    auto one = [&](auto get) {
        std::vector<double> values;
        for (auto const& o : f) {
            values.push_back(get(o));
        }
        double const lo = *std::min_element(values.begin(), values.end());
        double const hi = *std::max_element(values.begin(), values.end());
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (values[i] == lo || values[i] == hi) {
                d[i] = inf;
                continue;
            }
            double below = lo;
            double above = hi;
            for (double x : values) {
                if (x < values[i]) {
                    below = std::max(below, x);
                }
                if (x > values[i]) {
                    above = std::min(above, x);
                }
            }
            if (hi > lo) {
                d[i] += (above - below) / (hi - lo);
            }
        }
    };
    one([](bgi::ObjectiveVector const& o) { return o.cost; });
    one([](bgi::ObjectiveVector const& o) { return static_cast<double>(o.risk); });
    return d;
}

inline std::set<bgi::ObjectiveVector> front_set(std::vector<bgi::ObjectiveVector> const& v)
{
    std::set<bgi::ObjectiveVector> out;
    if (v.empty()) {
        return out;
    }
    auto const fronts = peel(v);
    for (auto i : fronts.front()) {
        out.insert(v[i]);
    }
    return out;
}

} // namespace oracle
