#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bgi/genome.hpp"
#include "bgi/objectives.hpp"

namespace bgi {

// Run-wide archive of every genome ever generated, in insertion order.
class SolutionRepository {
public:
    struct Entry {
        Genome genome;
        std::optional<ObjectiveVector> objectives;
        std::size_t generation = 0;
    };

    [[nodiscard]] bool contains(Genome const& genome) const { return index_.contains(genome); }

    // Returns false (and leaves the repository unchanged) if already present.
    bool insert(Genome const& genome, std::size_t generation);

    void set_objectives(Genome const& genome, ObjectiveVector const& objectives);

    [[nodiscard]] Entry const* find(Genome const& genome) const;
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] std::span<Entry const> entries() const noexcept { return entries_; }

private:
    std::vector<Entry> entries_;
    std::unordered_map<Genome, std::size_t, GenomeHash> index_;
};

} // namespace bgi
