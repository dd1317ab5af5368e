#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sleuth/engine.hpp"

namespace sleuth {

enum class Policy { baseline, compact, polycentric };

Policy parse_policy(const std::string& text);
std::string to_string(Policy policy);

struct ScenarioSpec {
  std::string name;
  Policy policy = Policy::baseline;
  // Patches smaller than this are "small". Unset: 1% of the seed urban
  // cells, at least 1.
  std::optional<std::size_t> small_patch_threshold;
  int buffer_radius = 1;
  int boundary_ring_width = 2;

  void validate() const;
};

std::size_t resolve_small_patch_threshold(const ScenarioSpec& spec, const BinaryLayer& seed_urban);

// Exclusion layer of a policy. Baseline adds cells at or above the critical
// slope to `base_excluded`. Compact also excludes a `buffer_radius` ring
// around every small patch. Polycentric instead excludes a
// `boundary_ring_width` ring outside the largest patch (holes filled). Cells of
// `seed_urban` are never newly excluded.
BinaryLayer build_exclusion(const ScenarioSpec& spec, const BinaryLayer& seed_urban, const BinaryLayer& base_excluded,
                            const SlopeLayer& slope, double critical_slope);

struct ProbabilityMap {
  int year = 0;
  RealGrid values;
};

struct ForecastReport {
  std::string scenario;
  CoefficientSet coeffs;
  int start_year = 0;
  std::vector<GrowthCycleStats> years;  // ensemble means, start_year+1 ..
};

struct ForecastInput {
  BinaryLayer start_urban;
  BinaryLayer roads;
  SlopeLayer slope;
  BinaryLayer excluded;
  CoefficientSet coeffs;
  int start_year = 0;
};

struct ForecastResult {
  std::vector<ProbabilityMap> maps;
  ForecastReport report;
};

ForecastResult forecast(const ForecastInput& input, const SelfModConfig& config, int horizon_years, int n_mc,
                        std::uint64_t base_seed, const std::string& scenario_name = "forecast", int jobs = 1);

// One row per forecast year: coefficients in force, growth counts, form measures.
void write_forecast_csv(std::ostream& os, const ForecastReport& report);

struct ScenarioComparison {
  std::vector<int> years;
  std::vector<std::string> scenarios;
  std::vector<std::vector<double>> grw_rate;  // [scenario][year]
  std::vector<std::vector<double>> area;
  // Scenario indices by descending final-year grw_rate, stable on ties.
  std::vector<std::size_t> ranking;
};

ScenarioComparison compare_scenarios(std::span<const ForecastReport> reports);

void write_comparison_csv(std::ostream& os, const ScenarioComparison& comparison);

}  // namespace sleuth
