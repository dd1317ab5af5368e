#pragma once

#include <cstdint>
#include <vector>

#include "sleuth/engine.hpp"

namespace sleuth {

struct MonteCarloOptions {
  // Worker threads; results do not depend on it.
  int jobs = 1;
  StatsDetail detail = StatsDetail::full;
  // When non-empty, only these years get full statistics.
  std::vector<int> full_stats_years;
  // Accumulate per-year hit counts (needed for annual probability maps).
  bool yearly_hits = false;
};

struct EnsembleResult {
  int start_year = 0;
  int n_runs = 0;
  // mean_stats[i] describes year start_year + 1 + i.
  std::vector<GrowthCycleStats> mean_stats;
  // Per cell, the number of runs in which it ended urban.
  std::vector<std::uint32_t> hit_counts;
  // yearly_hits[i] as hit_counts, at the end of year start_year + 1 + i.
  std::vector<std::vector<std::uint32_t>> yearly_hits;
  // Final-year coefficients of each run, in run order.
  std::vector<CoefficientSet> final_coeffs;
  GridDims dims;

  const GrowthCycleStats& stats_for(int year) const;
  bool covers(int year) const;

  friend bool operator==(const EnsembleResult&, const EnsembleResult&) = default;
};

// Statistics and final layer of one run.
struct RunResult {
  std::vector<GrowthCycleStats> stats;
  BinaryLayer final_urban;
  std::vector<BinaryLayer> yearly_urban;  // only when requested
  CoefficientSet final_coeffs;
};

RunResult run_simulation(const SimState& initial, const SelfModConfig& config, int years, std::uint64_t seed,
                         const MonteCarloOptions& options = {}, bool keep_yearly = false);

// Run i is seeded with derive_seed(base_seed, i). Per-year statistics are the
// field-wise means over runs, summed in run order, so the result is identical
// for any number of workers.
EnsembleResult monte_carlo(const SimState& initial, const SelfModConfig& config, int years, int n_runs,
                           std::uint64_t base_seed, const MonteCarloOptions& options = {});

// Field-wise mean of equally long per-year stats series.
std::vector<GrowthCycleStats> average_stats(const std::vector<std::vector<GrowthCycleStats>>& runs);

}  // namespace sleuth
