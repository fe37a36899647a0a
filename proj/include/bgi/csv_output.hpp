#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bgi/optimizer.hpp"
#include "bgi/repository.hpp"
#include "bgi/validation.hpp"

namespace bgi {

// All writers emit LF line endings and shortest round-trip decimals so the
// files are byte-identical across runs.

// genome_bits,cost,risk,generation_found (empty for oracle members)
void write_pareto_csv(std::filesystem::path const& path, ParetoFront const& front);
[[nodiscard]] ParetoFront read_pareto_csv(std::filesystem::path const& path);

// genome_bits,cost,risk,generation in insertion order
void write_repository_csv(std::filesystem::path const& path, SolutionRepository const& repo);
// Enumeration rows in lexicographic genome order; generation is 0.
void write_repository_csv(std::filesystem::path const& path, EnumerationResult const& result);

// generation,front_size,repo_fraction,converged_flag; the flag column is
// empty when the run had no reference front.
void write_history_csv(std::filesystem::path const& path, std::vector<ConvergenceRecord> const& records,
                       bool with_reference);

// zone_id,fraction,band; zone_id is the zone label.
void write_contribution_csv(std::filesystem::path const& path, ZoneContribution const& contribution,
                            std::vector<std::string> const& labels);

void write_text(std::filesystem::path const& path, std::string const& text);

} // namespace bgi
