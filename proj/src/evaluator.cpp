#include "bgi/evaluator.hpp"

#include "bgi/cost_model.hpp"
#include "bgi/errors.hpp"

namespace bgi {

FloodResult RasterFloodEvaluator::evaluate(Genome const& genome, CatchmentScenario const& scenario) const
{
    return simulate_event(scenario.grid, activation_mask(scenario, genome), scenario.rain, scenario.sim);
}

ScenarioObjective::ScenarioObjective(CatchmentScenario const& scenario, FloodEvaluator const& evaluator)
    : scenario_(scenario), evaluator_(evaluator), exposure_(scenario.buildings, scenario.grid, scenario.criteria)
{
}

ObjectiveVector ScenarioObjective::operator()(Genome const& genome) const
{
    auto const start = std::chrono::steady_clock::now();
    ++invocations_;
    if (genome.size() != scenario_.zone_count()) {
        throw InvalidArgument("genome length " + std::to_string(genome.size()) + " does not match the " +
                              std::to_string(scenario_.zone_count()) + "-zone scenario");
    }
    auto const flood = evaluator_.evaluate(genome, scenario_);
    ObjectiveVector objectives{solution_cost(genome, scenario_.costs), exposure_.count(flood.max_depth).exposed};
    auto const elapsed = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
    double seen = nanoseconds_.load();
    while (!nanoseconds_.compare_exchange_weak(seen, seen + elapsed)) {
    }
    return objectives;
}

OptimizationResult run_optimization(CatchmentScenario const& scenario, FloodEvaluator const& evaluator,
                                    GAConfig const& config, GenerationObserver const& observer)
{
    ScenarioObjective objective(scenario, evaluator);
    return run_optimization(scenario.zone_count(), objective.function(), config, observer);
}

} // namespace bgi
