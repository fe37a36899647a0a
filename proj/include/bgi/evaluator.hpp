#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>

#include "bgi/exposure.hpp"
#include "bgi/flood_simulator.hpp"
#include "bgi/genome.hpp"
#include "bgi/objectives.hpp"
#include "bgi/optimizer.hpp"
#include "bgi/scenario.hpp"

namespace bgi {

// The flood evaluator contract: a deterministic FloodResult for the
// catchment with permeability active exactly in the genome's 1-bit zones.
// Implementations must tolerate concurrent calls on independent genomes.
class FloodEvaluator {
public:
    virtual ~FloodEvaluator() = default;
    [[nodiscard]] virtual FloodResult evaluate(Genome const& genome, CatchmentScenario const& scenario) const = 0;
};

// Built-in backend: simulate_event on the scenario's grid and rain.
class RasterFloodEvaluator final : public FloodEvaluator {
public:
    [[nodiscard]] FloodResult evaluate(Genome const& genome, CatchmentScenario const& scenario) const override;
};

// (F_C, F_R) for a scenario: masked zone-cost sum and exposed-building count.
// Counts invocations and accumulated evaluation time.
class ScenarioObjective {
public:
    ScenarioObjective(CatchmentScenario const& scenario, FloodEvaluator const& evaluator);

    [[nodiscard]] ObjectiveVector operator()(Genome const& genome) const;
    [[nodiscard]] ObjectiveFunction function() const
    {
        return [this](Genome const& g) { return (*this)(g); };
    }

    [[nodiscard]] std::size_t invocations() const noexcept { return invocations_.load(); }
    [[nodiscard]] double evaluation_seconds() const noexcept { return nanoseconds_.load() * 1e-9; }
    [[nodiscard]] CatchmentScenario const& scenario() const noexcept { return scenario_; }

private:
    CatchmentScenario const& scenario_;
    FloodEvaluator const& evaluator_;
    ExposureIndex exposure_;
    mutable std::atomic<std::size_t> invocations_{0};
    mutable std::atomic<double> nanoseconds_{0.0};
};

// Runs the optimizer on a scenario with GA settings from the config.
[[nodiscard]] OptimizationResult run_optimization(CatchmentScenario const& scenario, FloodEvaluator const& evaluator,
                                                  GAConfig const& config, GenerationObserver const& observer = {});

} // namespace bgi
