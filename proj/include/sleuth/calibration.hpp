#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sleuth/coefficients.hpp"
#include "sleuth/layer_stack.hpp"
#include "sleuth/metrics.hpp"

namespace sleuth {

struct CoefficientRange {
  int lo = 0;
  int hi = 100;
  int step = 25;

  friend bool operator==(const CoefficientRange&, const CoefficientRange&) = default;
};

struct PhaseConfig {
  std::string name;
  // Indexed like CoefficientSet::kNames.
  std::array<CoefficientRange, 5> ranges{};
  int resolution_divisor = 1;
  int mc_runs = 1;
  int top_k = 3;
  // Upper bound on lattice values per coefficient; 0 means unbounded. An axis
  // that would exceed it is walked at the smallest coarser step that fits.
  int max_axis_values = 0;

  void validate() const;
};

// Values lo, lo+s, ... <= hi, plus hi itself, where s is the configured step
// or the coarser step forced by `max_axis_values`.
std::vector<int> axis_values(const CoefficientRange& range, int max_axis_values = 0);
// Effective spacing used by axis_values.
int axis_step(const CoefficientRange& range, int max_axis_values = 0);

// Cartesian product of the axes, last coefficient varying fastest.
std::vector<CoefficientSet> enumerate_lattice(const PhaseConfig& phase);

struct RankedSet {
  CoefficientSet coeffs;
  MetricVector metrics;

  friend bool operator==(const RankedSet&, const RankedSet&) = default;
};

struct CalibrationReport {
  PhaseConfig phase;
  std::size_t lattice_size = 0;
  // Descending leesallee, ties broken by the lexicographically smallest set.
  std::vector<RankedSet> ranked;
  double wall_seconds = 0.0;

  const RankedSet& best() const { return ranked.front(); }
};

// Ranking order used by every report.
bool ranks_before(const RankedSet& a, const RankedSet& b);

struct SweepOptions {
  int jobs = 1;
  // Called after each evaluated set with (done, total); never affects results.
  std::function<void(std::size_t, std::size_t)> progress;
};

// Historical data prepared at one resolution.
struct CalibrationData {
  std::shared_ptr<const Landscape> landscape;
  BinaryLayer initial_urban;
  int start_year = 0;
  int stop_year = 0;
  ControlSeries controls;  // control years after the start year
  BinaryLayer final_actual;

  // Downsamples every layer by `divisor`. Coarse exclusion cells that overlap
  // any coarse urban control cell are released so the seed state stays valid.
  static CalibrationData prepare(const LayerStack& stack, int divisor);
};

// Monte Carlo evaluation of one coefficient set from the start year to the
// stop year with self-modification active.
MetricVector evaluate_coefficients(const CalibrationData& data, const CoefficientSet& coeffs,
                                   const SelfModConfig& config, int mc_runs, std::uint64_t base_seed);

// Sweeps the phase lattice plus any `inject` sets not already on it.
CalibrationReport run_phase(const PhaseConfig& phase, const LayerStack& stack, const SelfModConfig& config,
                            std::uint64_t base_seed, const SweepOptions& options = {},
                            std::span<const CoefficientSet> inject = {});

// Per coefficient: [min, max] over the top_k sets, widened by the reporting
// phase's effective step on both sides and clamped to [0,100], walked at
// `new_step`.
std::array<CoefficientRange, 5> narrow_ranges(const CalibrationReport& report, int top_k, int new_step);

// Coarse / fine / final phases; see README for the values.
std::vector<PhaseConfig> default_schedule();

struct CalibrationResult {
  CoefficientSet best;
  std::vector<CalibrationReport> reports;
};

// Runs the schedule, narrowing ranges between phases and carrying each
// phase's best set into the next lattice. The last phase must run at full
// resolution.
CalibrationResult calibrate(const LayerStack& stack, std::span<const PhaseConfig> schedule,
                            const SelfModConfig& config, std::uint64_t base_seed, const SweepOptions& options = {});

// Mean of each coefficient, rounded to the nearest integer and clamped.
CoefficientSet average_coefficients(std::span<const CoefficientSet> sets);

// Simulates the calibration period from `best` and averages the final-year
// coefficients over `mc_runs` runs.
CoefficientSet derive_forecast_coefficients(const CoefficientSet& best, const LayerStack& stack,
                                            const SelfModConfig& config, int mc_runs, std::uint64_t base_seed,
                                            int jobs = 1);

void write_report_csv(std::ostream& os, const CalibrationReport& report);

}  // namespace sleuth
