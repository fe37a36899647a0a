#include "bgi/cost_model.hpp"

#include <cmath>

#include "bgi/errors.hpp"

namespace bgi {

void CostParams::validate() const
{
    if (!(capital_per_m2 >= 0.0) || !(operational_per_m2_year >= 0.0)) {
        throw InvalidArgument("unit costs must be non-negative");
    }
    if (!(inflation_rate > -1.0)) {
        throw InvalidArgument("inflation rate must exceed -1");
    }
    if (lifespan_years < 0) {
        throw InvalidArgument("lifespan must be non-negative");
    }
}

double future_value(double base, double rate, int year)
{
    if (!(rate > -1.0) || year < 0) {
        throw InvalidArgument("future_value requires rate > -1 and year >= 0");
    }
    double value = base;
    for (int y = 0; y < year; ++y) {
        value *= 1.0 + rate;
    }
    return value;
}

double unit_lifecycle_cost(CostParams const& params)
{
    params.validate();
    double cost = params.capital_per_m2;
    for (int y = 1; y <= params.lifespan_years; ++y) {
        cost += future_value(params.operational_per_m2_year, params.inflation_rate, y);
    }
    return cost;
}

double snap_cost(double value)
{
    return std::nearbyint(value / cost_quantum) * cost_quantum;
}

ZoneCostTable ZoneCostTable::from_areas(std::vector<int> zone_ids, std::vector<double> areas_m2,
                                        CostParams const& params)
{
    if (zone_ids.size() != areas_m2.size()) {
        throw InvalidArgument("zone id and area lists differ in length");
    }
    ZoneCostTable table;
    table.source_ = Source::area;
    table.unit_cost_ = snap_cost(unit_lifecycle_cost(params));
    for (std::size_t j = 0; j < zone_ids.size(); ++j) {
        if (!(areas_m2[j] >= 0.0)) {
            throw InvalidArgument("zone " + std::to_string(zone_ids[j]) + " has a negative area");
        }
        table.rows_.push_back(ZoneCost{zone_ids[j], areas_m2[j], snap_cost(table.unit_cost_ * areas_m2[j])});
    }
    return table;
}

ZoneCostTable ZoneCostTable::from_costs(std::vector<int> zone_ids, std::vector<double> costs,
                                        std::vector<double> areas_m2)
{
    if (zone_ids.size() != costs.size() || (!areas_m2.empty() && areas_m2.size() != costs.size())) {
        throw InvalidArgument("zone id, cost and area lists differ in length");
    }
    ZoneCostTable table;
    table.source_ = Source::precomputed;
    for (std::size_t j = 0; j < zone_ids.size(); ++j) {
        if (!(costs[j] >= 0.0)) {
            throw InvalidArgument("zone " + std::to_string(zone_ids[j]) + " has a negative lifecycle cost");
        }
        table.rows_.push_back(ZoneCost{zone_ids[j], areas_m2.empty() ? 0.0 : areas_m2[j], snap_cost(costs[j])});
    }
    return table;
}

ZoneCostTable ZoneCostTable::from_rows(std::vector<ZoneCost> rows, Source source, double unit_cost)
{
    ZoneCostTable table;
    table.source_ = source;
    table.unit_cost_ = unit_cost;
    for (auto& row : rows) {
        row.lifecycle_cost = snap_cost(row.lifecycle_cost);
    }
    table.rows_ = std::move(rows);
    return table;
}

double ZoneCostTable::total() const
{
    double sum = 0.0;
    for (auto const& row : rows_) {
        sum += row.lifecycle_cost;
    }
    return sum;
}

ZoneCostTable ZoneCostTable::scaled(double factor) const
{
    ZoneCostTable copy = *this;
    for (auto& row : copy.rows_) {
        row.area_m2 *= factor;
        row.lifecycle_cost = snap_cost(source_ == Source::area ? unit_cost_ * row.area_m2 : row.lifecycle_cost * factor);
    }
    return copy;
}

double solution_cost(Genome const& genome, ZoneCostTable const& table)
{
    if (genome.size() != table.size()) {
        throw InvalidArgument("genome length " + std::to_string(genome.size()) + " does not match the " +
                              std::to_string(table.size()) + "-zone cost table");
    }
    double cost = 0.0;
    for (std::size_t j = 0; j < genome.size(); ++j) {
        if (genome[j]) {
            cost += table[j].lifecycle_cost;
        }
    }
    return cost;
}

} // namespace bgi
