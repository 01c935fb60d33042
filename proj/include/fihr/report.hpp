#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "fihr/metrics.hpp"
#include "fihr/sim.hpp"

namespace fihr::report {

// Per protocol: {protocol}_{scenario}_run{k}.csv for every run and
// {protocol}_{scenario}_mean.csv; then one summary.csv covering all of them.
// Returns the paths written. Throws metrics::IoError with the path on failure.
std::vector<std::filesystem::path> emit_csv(std::span<const sim::SimulationResult> results,
                                            const std::filesystem::path& dir,
                                            std::string_view scenario);

std::vector<metrics::SummaryRow> summary_rows(const sim::SimulationResult& result);

}  // namespace fihr::report
