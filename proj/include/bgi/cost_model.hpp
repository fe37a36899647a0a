#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bgi/genome.hpp"

namespace bgi {

struct CostParams {
    double capital_per_m2 = 65.0;            // c_c, installed once at year 0
    double operational_per_m2_year = 0.5;    // c_o at base-year prices
    double inflation_rate = 0.029;           // i, per year
    int lifespan_years = 40;                 // L

    void validate() const;
};

// base * (1 + rate)^year by repeated multiplication.
[[nodiscard]] double future_value(double base, double rate, int year);

// Capital cost plus every maintenance year inflated to its payment year:
// c_c + sum_{y=1..L} c_o (1 + i)^y. No discounting.
[[nodiscard]] double unit_lifecycle_cost(CostParams const& params);

// Zone costs live on a 2^-16 currency grid so that masked sums are exact
// and independent of summation order (cost additivity holds bit-for-bit).
inline constexpr double cost_quantum = 0x1.0p-16;
[[nodiscard]] double snap_cost(double value);

struct ZoneCost {
    int zone_id = 0;
    double area_m2 = 0.0;
    double lifecycle_cost = 0.0;
};

class ZoneCostTable {
public:
    enum class Source { area, precomputed };

    ZoneCostTable() = default;

    // C(I_j) = snapped unit lifecycle cost * s(I_j), itself snapped (a no-op for integral areas).
    static ZoneCostTable from_areas(std::vector<int> zone_ids, std::vector<double> areas_m2, CostParams const& params);
    // Lifecycle costs supplied directly; areas are optional metadata (0 if unknown).
    static ZoneCostTable from_costs(std::vector<int> zone_ids, std::vector<double> costs,
                                    std::vector<double> areas_m2 = {});
    // Rows as given (costs snapped); used when costs are split rather than recomputed.
    static ZoneCostTable from_rows(std::vector<ZoneCost> rows, Source source, double unit_cost);

    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] std::span<ZoneCost const> rows() const noexcept { return rows_; }
    [[nodiscard]] ZoneCost const& operator[](std::size_t j) const { return rows_[j]; }
    [[nodiscard]] Source source() const noexcept { return source_; }
    [[nodiscard]] double unit_cost() const noexcept { return unit_cost_; }
    [[nodiscard]] double total() const;

    // Same table with every area multiplied by factor (costs rescaled accordingly).
    [[nodiscard]] ZoneCostTable scaled(double factor) const;

private:
    std::vector<ZoneCost> rows_;
    Source source_ = Source::precomputed;
    double unit_cost_ = 0.0;
};

// F_C: sum of C(I_j) over zones whose bit is set.
[[nodiscard]] double solution_cost(Genome const& genome, ZoneCostTable const& table);

} // namespace bgi
