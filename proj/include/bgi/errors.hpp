#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bgi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition on a caller-supplied argument.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Population size larger than the search space (p > 2^n).
class InfeasiblePopulation : public Error {
public:
    using Error::Error;
};

/// Every genome of the search space is already in the repository.
class SearchSpaceExhausted : public Error {
public:
    using Error::Error;
};

/// Malformed text input (bit strings, CSV, ASCII grids, config files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// The evaluator failed; carries the genome that was being evaluated.
class EvaluationError : public Error {
public:
    EvaluationError(std::string genome, std::string const& what)
        : Error("evaluation failed for genome " + genome + ": " + what), genome_(std::move(genome)) {}

    [[nodiscard]] std::string const& genome() const noexcept { return genome_; }

private:
    std::string genome_;
};

/// Refusal to enumerate a search space above the configured cap.
class EnumerationRefused : public Error {
public:
    EnumerationRefused(std::size_t zones, std::size_t cap)
        : Error("enumeration of " + std::to_string(zones) + " zones requires 2^" + std::to_string(zones) + " = " +
                (zones < 64 ? std::to_string(std::uint64_t{1} << zones) : std::string("more than 2^63")) +
                " evaluations; the cap is 2^" + std::to_string(cap)),
          zones_(zones), cap_(cap) {}

    [[nodiscard]] std::size_t zones() const noexcept { return zones_; }
    [[nodiscard]] std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t zones_;
    std::size_t cap_;
};

/// Scenario inconsistency. The kind distinguishes the failure for callers and tests.
class ScenarioError : public Error {
public:
    enum class Kind { missing_file, dimension_mismatch, zone_id_gap, building_outside_grid, cross_reference, invalid_value };

    ScenarioError(Kind kind, std::string const& what) : Error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace bgi
