#include "bgi/repository.hpp"

#include "bgi/errors.hpp"

namespace bgi {

bool SolutionRepository::insert(Genome const& genome, std::size_t generation)
{
    auto [it, inserted] = index_.try_emplace(genome, entries_.size());
    if (!inserted) {
        return false;
    }
    entries_.push_back(Entry{genome, std::nullopt, generation});
    return true;
}

void SolutionRepository::set_objectives(Genome const& genome, ObjectiveVector const& objectives)
{
    auto it = index_.find(genome);
    if (it == index_.end()) {
        throw InvalidArgument("genome " + genome.to_string() + " is not in the repository");
    }
    entries_[it->second].objectives = objectives;
}

SolutionRepository::Entry const* SolutionRepository::find(Genome const& genome) const
{
    auto it = index_.find(genome);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

} // namespace bgi
