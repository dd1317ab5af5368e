#include "sleuth/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "parallel.hpp"
#include "sleuth/error.hpp"
#include "sleuth/raster_ops.hpp"

namespace sleuth {

void PhaseConfig::validate() const {
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto& r = ranges[i];
    const std::string what = "phase '" + name + "' " + std::string(CoefficientSet::kNames[i]);
    if (r.lo < 0 || r.hi > 100 || r.lo > r.hi) {
      throw std::invalid_argument(what + ": range [" + std::to_string(r.lo) + "," + std::to_string(r.hi) +
                                  "] must satisfy 0 <= lo <= hi <= 100");
    }
    if (r.step < 1) throw std::invalid_argument(what + ": step must be >= 1");
  }
  if (resolution_divisor < 1) throw std::invalid_argument("phase '" + name + "': divisor must be >= 1");
  if (mc_runs < 1) throw std::invalid_argument("phase '" + name + "': mc_runs must be >= 1");
  if (top_k < 1) throw std::invalid_argument("phase '" + name + "': top_k must be >= 1");
  if (max_axis_values != 0 && max_axis_values < 2) {
    throw std::invalid_argument("phase '" + name + "': max_axis_values must be 0 or >= 2");
  }
}

int axis_step(const CoefficientRange& range, int max_axis_values) {
  int step = range.step;
  const int width = range.hi - range.lo;
  if (max_axis_values >= 2 && width > 0) {
    step = std::max(step, (width + max_axis_values - 2) / (max_axis_values - 1));
  }
  return step;
}

std::vector<int> axis_values(const CoefficientRange& range, int max_axis_values) {
  const int step = axis_step(range, max_axis_values);
  std::vector<int> values;
  for (int v = range.lo; v <= range.hi; v += step) values.push_back(v);
  if (values.back() != range.hi) values.push_back(range.hi);
  return values;
}

std::vector<CoefficientSet> enumerate_lattice(const PhaseConfig& phase) {
  phase.validate();
  std::array<std::vector<int>, 5> axes;
  for (std::size_t i = 0; i < 5; ++i) axes[i] = axis_values(phase.ranges[i], phase.max_axis_values);
  std::vector<CoefficientSet> sets;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  sets.reserve(total);
  for (int d : axes[0])
    for (int b : axes[1])
      for (int s : axes[2])
        for (int sr : axes[3])
          for (int rg : axes[4]) sets.push_back({double(d), double(b), double(s), double(sr), double(rg)});
  return sets;
}

bool ranks_before(const RankedSet& a, const RankedSet& b) {
  if (a.metrics.leesallee != b.metrics.leesallee) return a.metrics.leesallee > b.metrics.leesallee;
  return lexicographic_less(a.coeffs, b.coeffs);
}

CalibrationData CalibrationData::prepare(const LayerStack& stack, int divisor) {
  if (stack.urban_series.size() < 2) throw ValidationError("calibration: need at least two urban years");
  if (stack.road_series.empty()) throw ValidationError("calibration: need at least one road layer");
  std::vector<Dated<BinaryLayer>> urban;
  for (const auto& u : stack.urban_series) urban.push_back({u.year, downsample(u.layer, divisor)});
  auto land = std::make_shared<Landscape>();
  land->slope = downsample(stack.slope, divisor);
  land->excluded = downsample(stack.excluded, divisor);
  for (const auto& u : urban) land->excluded = difference(land->excluded, u.layer);
  for (const auto& r : stack.road_series) land->roads.push_back({r.year, downsample(r.layer, divisor)});
  land->validate();

  CalibrationData data;
  data.initial_urban = urban.front().layer;
  data.start_year = urban.front().year;
  data.stop_year = urban.back().year;
  data.final_actual = urban.back().layer;
  data.controls = ControlSeries::from_layers(std::span(urban).subspan(1), land->slope, land->excluded);
  data.landscape = std::move(land);
  return data;
}

MetricVector evaluate_coefficients(const CalibrationData& data, const CoefficientSet& coeffs,
                                   const SelfModConfig& config, int mc_runs, std::uint64_t base_seed) {
  const SimState initial = make_state(data.landscape, data.initial_urban, coeffs, data.start_year);
  MonteCarloOptions options;
  for (const auto& cy : data.controls.years) options.full_stats_years.push_back(cy.year);
  const EnsembleResult ensemble =
      monte_carlo(initial, config, data.stop_year - data.start_year, mc_runs, base_seed, options);
  return metric_vector(ensemble, data.controls, data.final_actual);
}

CalibrationReport run_phase(const PhaseConfig& phase, const LayerStack& stack, const SelfModConfig& config,
                            std::uint64_t base_seed, const SweepOptions& options,
                            std::span<const CoefficientSet> inject) {
  const auto t0 = std::chrono::steady_clock::now();
  phase.validate();
  config.validate();
  if (const auto violations = validate(stack, 1); !violations.empty()) {
    throw ValidationError("calibration input invalid: " + to_string(violations.front()));
  }
  std::vector<CoefficientSet> lattice = enumerate_lattice(phase);
  CalibrationReport report;
  report.phase = phase;
  report.lattice_size = lattice.size();
  for (const auto& extra : inject) {
    if (std::find(lattice.begin(), lattice.end(), extra) == lattice.end()) lattice.push_back(extra);
  }

  const CalibrationData data = CalibrationData::prepare(stack, phase.resolution_divisor);
  report.ranked.resize(lattice.size());
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  detail::parallel_for(lattice.size(), options.jobs, [&](std::size_t, std::size_t i) {
    report.ranked[i] = {lattice[i], evaluate_coefficients(data, lattice[i], config, phase.mc_runs, base_seed)};
    const std::size_t n = ++done;
    if (options.progress) {
      std::lock_guard lock(progress_mutex);
      options.progress(n, lattice.size());
    }
  });
  std::sort(report.ranked.begin(), report.ranked.end(), ranks_before);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::array<CoefficientRange, 5> narrow_ranges(const CalibrationReport& report, int top_k, int new_step) {
  if (report.ranked.empty()) throw std::invalid_argument("narrow_ranges: empty report");
  if (top_k < 1) throw std::invalid_argument("narrow_ranges: top_k must be >= 1");
  if (new_step < 1) throw std::invalid_argument("narrow_ranges: step must be >= 1");
  const std::size_t k = std::min(report.ranked.size(), static_cast<std::size_t>(top_k));
  std::array<CoefficientRange, 5> out;
  for (std::size_t c = 0; c < 5; ++c) {
    long lo = 100;
    long hi = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const long v = std::lround(report.ranked[i].coeffs.as_array()[c]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const int old_step = axis_step(report.phase.ranges[c], report.phase.max_axis_values);
    out[c].lo = static_cast<int>(std::max(0L, lo - old_step));
    out[c].hi = static_cast<int>(std::min(100L, hi + old_step));
    out[c].step = new_step;
  }
  return out;
}

std::vector<PhaseConfig> default_schedule() {
  auto phase = [](std::string name, int step, int divisor, int mc, int max_axis) {
    PhaseConfig p;
    p.name = std::move(name);
    for (auto& r : p.ranges) r = {0, 100, step};
    p.resolution_divisor = divisor;
    p.mc_runs = mc;
    p.top_k = 3;
    p.max_axis_values = max_axis;
    return p;
  };
  return {phase("coarse", 25, 4, 4, 0), phase("fine", 5, 2, 7, 7), phase("final", 1, 1, 10, 7)};
}

CalibrationResult calibrate(const LayerStack& stack, std::span<const PhaseConfig> schedule,
                            const SelfModConfig& config, std::uint64_t base_seed, const SweepOptions& options) {
  if (schedule.empty()) throw std::invalid_argument("calibrate: empty schedule");
  if (schedule.back().resolution_divisor != 1) {
    throw std::invalid_argument("calibrate: the last phase must run at full resolution (divisor 1)");
  }
  CalibrationResult result;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    PhaseConfig phase = schedule[k];
    std::vector<CoefficientSet> inject;
    if (k > 0) {
      const CalibrationReport& prev = result.reports.back();
      const auto narrowed = narrow_ranges(prev, prev.phase.top_k, 1);
      for (std::size_t c = 0; c < 5; ++c) {
        phase.ranges[c].lo = narrowed[c].lo;
        phase.ranges[c].hi = narrowed[c].hi;
      }
      inject.push_back(prev.best().coeffs);
    }
    result.reports.push_back(run_phase(phase, stack, config, base_seed, options, inject));
  }
  result.best = result.reports.back().best().coeffs;
  return result;
}

CoefficientSet average_coefficients(std::span<const CoefficientSet> sets) {
  if (sets.empty()) throw std::invalid_argument("average_coefficients: no sets");
  std::array<double, 5> sum{};
  for (const auto& s : sets) {
    const auto v = s.as_array();
    for (std::size_t i = 0; i < 5; ++i) sum[i] += v[i];
  }
  for (double& v : sum) v /= static_cast<double>(sets.size());
  return CoefficientSet::from_array(sum).rounded().clamped();
}

CoefficientSet derive_forecast_coefficients(const CoefficientSet& best, const LayerStack& stack,
                                            const SelfModConfig& config, int mc_runs, std::uint64_t base_seed,
                                            int jobs) {
  if (mc_runs < 1) throw std::invalid_argument("derive_forecast_coefficients: mc_runs must be >= 1");
  const CalibrationData data = CalibrationData::prepare(stack, 1);
  const SimState initial = make_state(data.landscape, data.initial_urban, best, data.start_year);
  MonteCarloOptions options;
  options.jobs = jobs;
  options.detail = StatsDetail::counts;
  const EnsembleResult ensemble =
      monte_carlo(initial, config, data.stop_year - data.start_year, mc_runs, base_seed, options);
  return average_coefficients(ensemble.final_coeffs);
}

void write_report_csv(std::ostream& os, const CalibrationReport& report) {
  write_metric_header(os);
  for (const auto& row : report.ranked) write_metric_row(os, row.coeffs, row.metrics);
}

}  // namespace sleuth
