#pragma once

#include <compare>
#include <cstdint>

namespace bgi {

// (F_C, F_R): lifecycle cost and exposed-building count, both minimized.
struct ObjectiveVector {
    double cost = 0.0;
    std::int64_t risk = 0;

    friend auto operator<=>(ObjectiveVector const&, ObjectiveVector const&) = default;
    friend bool operator==(ObjectiveVector const&, ObjectiveVector const&) = default;
};

// a dominates b: no worse in both objectives and strictly better in one.
[[nodiscard]] constexpr bool dominates(ObjectiveVector const& a, ObjectiveVector const& b) noexcept
{
    return a.cost <= b.cost && a.risk <= b.risk && (a.cost < b.cost || a.risk < b.risk);
}

} // namespace bgi
