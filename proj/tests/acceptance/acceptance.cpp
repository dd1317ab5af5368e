// Acceptance gate: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "sleuth/calibration.hpp"
#include "sleuth/commands.hpp"
#include "sleuth/metrics.hpp"
#include "sleuth/monte_carlo.hpp"
#include "sleuth/raster_ops.hpp"
#include "sleuth/scenario.hpp"
#include "sleuth/synthetic.hpp"
#include "support.hpp"

using namespace sleuth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failures of a criterion.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failures: " + notes_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream notes_;
};

std::string num(double v, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

// 1. Growth-rate arithmetic on three reference area / new-pixel pairs.
Outcome growth_rate_arithmetic() {
  struct Row {
    double grw_pix, area, expected;
  };
  const Row rows[] = {{11299, 602098, 1.88}, {6471, 684400, 0.95}, {5028, 739900, 0.68}};
  Tally t;
  std::string got;
  for (const auto& r : rows) {
    const double v = growth_rate(r.grw_pix, r.area);
    got += (got.empty() ? "" : " ") + num(v);
    t.require(std::abs(v - r.expected) <= 0.01, num(v) + " vs " + num(r.expected, 2));
  }
  return t.outcome("rates " + got);
}

// 2. Accounting identities over randomized cycles.
Outcome accounting_identities() {
  std::mt19937_64 gen(2024);
  Tally t;
  std::uniform_int_distribution<int> side(3, 64);
  std::uniform_real_distribution<double> coeff(0.0, 100.0);
  std::size_t urbanized = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const GridDims d{side(gen), side(gen)};
    auto land = std::make_shared<Landscape>();
    land->slope = testing::random_slope(d, 100, gen);
    land->excluded = testing::random_layer(d, 0.15, gen);
    land->roads = {{0, testing::random_layer(d, 0.1, gen)}};
    BinaryLayer urban = testing::random_layer(d, 0.2, gen);
    for (std::size_t i = 0; i < urban.size(); ++i)
      if (land->excluded[i]) urban[i] = 0;
    SelfModConfig config;
    config.critical_slope = std::uniform_real_distribution<double>(5.0, 100.0)(gen);
    const CoefficientSet c{coeff(gen), coeff(gen), coeff(gen), coeff(gen), coeff(gen)};
    SimState state = make_state(land, urban, c, 0);
    const BinaryLayer before = state.urban;
    Rng rng(gen());
    const GrowthCycleStats s = run_cycle(state, rng, config, trial % 2 ? StatsDetail::full : StatsDetail::counts);

    const std::string at = "trial " + std::to_string(trial);
    t.require(s.grw_pix == s.sng + s.og + s.rt, at + ": grw_pix != sng+og+rt");
    t.require(s.area == static_cast<double>(before.count()) + s.grw_pix, at + ": area mismatch");
    t.require(s.area == static_cast<double>(state.urban.count()), at + ": area != urban count");
    std::size_t fresh = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (before[i] && !state.urban[i]) t.require(false, at + ": urban cell reverted");
      if (before[i] || !state.urban[i]) continue;
      ++fresh;
      t.require(!land->excluded[i], at + ": excluded cell urbanized");
      t.require(land->slope[i] < config.critical_slope, at + ": cell at or above critical slope urbanized");
    }
    t.require(static_cast<double>(fresh) == s.grw_pix, at + ": grw_pix != new cells");
    urbanized += fresh;
  }
  return t.outcome("1000 cycles, " + std::to_string(urbanized) + " cells urbanized");
}

// 3. Metric oracles.
Outcome metric_oracles() {
  Tally t;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const BinaryLayer a = testing::random_layer({16, 16}, density(gen), gen);
    const BinaryLayer b = testing::random_layer({16, 16}, density(gen), gen);
    const std::size_t den = testing::brute_lee_sallee_den(a, b);
    const double expected = den ? static_cast<double>(testing::brute_lee_sallee_num(a, b)) / den : 1.0;
    t.require(lee_sallee(a, b) == expected, "pair " + std::to_string(k));
  }

  const double hand[] = {1, 2, 3};
  const double modeled[] = {1, 2, 4};
  const double fixed_r2 = r2(hand, modeled);
  t.require(std::abs(fixed_r2 - 0.9643) <= 1e-4, "r2 (1,2,3)/(1,2,4) = " + num(fixed_r2, 6));
  for (int k = 0; k < 50; ++k) {
    std::vector<double> x(6), y(6);
    for (auto& v : x) v = density(gen) * 100;
    for (auto& v : y) v = density(gen) * 100;
    t.require(std::abs(r2(x, y) - testing::ols_r2(x, y)) <= 1e-4, "random r2 fixture " + std::to_string(k));
  }

  // Replaying the controls as the modeled history.
  synthetic::CitySpec spec;
  const LayerStack stack = synthetic::make_city(spec);
  std::vector<Dated<BinaryLayer>> controls_in(stack.urban_series.begin() + 1, stack.urban_series.end());
  const ControlSeries controls = ControlSeries::from_layers(controls_in, stack.slope, stack.excluded);
  EnsembleResult replay;
  replay.start_year = stack.urban_series.front().year;
  replay.n_runs = 1;
  replay.dims = stack.slope.dims();
  std::size_t next = 0;
  for (int y = replay.start_year + 1; y <= controls_in.back().year; ++y) {
    if (controls_in[next].year < y) ++next;
    const UrbanMeasures m = measure_urban(controls_in[next].layer, stack.slope, stack.excluded);
    GrowthCycleStats s;
    s.year = y;
    s.area = m.area;
    s.edges = m.edges;
    s.num_clusters = m.clusters;
    s.mean_cluster_size = m.mean_cluster_size;
    s.mean_slope = m.mean_slope;
    s.pct_urban = m.pct_urban;
    s.xmean = m.xmean;
    s.ymean = m.ymean;
    s.rad = m.rad;
    replay.mean_stats.push_back(s);
  }
  replay.hit_counts.assign(replay.dims.size(), 0);
  for (std::size_t i = 0; i < replay.dims.size(); ++i) replay.hit_counts[i] = controls_in.back().layer[i];
  const MetricVector v = metric_vector(replay, controls, controls_in.back().layer);
  const auto values = v.as_array();
  int checked = 0;
  for (std::size_t f = 0; f < values.size(); ++f) {
    t.require(values[f] == 1.0, "replay " + std::string(MetricVector::kNames[f]) + " = " + num(values[f], 6));
    ++checked;
  }
  return t.outcome("200 pairs exact, r2 " + num(fixed_r2) + ", replay 1.0 on " + std::to_string(checked) + " fields");
}

// 4. Monte Carlo contracts.
Outcome monte_carlo_contracts() {
  Tally t;
  synthetic::CitySpec spec;
  const LayerStack stack = synthetic::make_seed_city(spec);
  auto land = std::make_shared<Landscape>();
  land->slope = stack.slope;
  land->excluded = stack.excluded;
  land->roads = stack.road_series;
  const SimState initial = make_state(land, stack.urban_series.front().layer, {30, 50, 40, 20, 60}, 2000);
  const SelfModConfig config;

  MonteCarloOptions one;
  one.yearly_hits = true;
  MonteCarloOptions eight = one;
  eight.jobs = 8;
  const EnsembleResult a = monte_carlo(initial, config, 10, 16, 77, one);
  const EnsembleResult b = monte_carlo(initial, config, 10, 16, 77, eight);
  t.require(a == b, "1 vs 8 workers differ");

  const EnsembleResult pair = monte_carlo(initial, config, 10, 2, 5);
  const RunResult r0 = run_simulation(initial, config, 10, derive_seed(5, 0));
  const RunResult r1 = run_simulation(initial, config, 10, derive_seed(5, 1));
  using Field = double GrowthCycleStats::*;
  const Field fields[] = {&GrowthCycleStats::sng,          &GrowthCycleStats::og,
                          &GrowthCycleStats::rt,           &GrowthCycleStats::grw_pix,
                          &GrowthCycleStats::area,         &GrowthCycleStats::grw_rate,
                          &GrowthCycleStats::xmean,        &GrowthCycleStats::ymean,
                          &GrowthCycleStats::rad,          &GrowthCycleStats::pct_urban,
                          &GrowthCycleStats::num_clusters, &GrowthCycleStats::mean_cluster_size,
                          &GrowthCycleStats::edges,        &GrowthCycleStats::mean_slope};
  for (std::size_t y = 0; y < 10; ++y) {
    for (const Field f : fields) {
      t.require(pair.mean_stats[y].*f == (r0.stats[y].*f + r1.stats[y].*f) / 2.0,
                "two-run mean differs in year " + std::to_string(y + 1));
    }
  }
  for (std::size_t i = 0; i < pair.hit_counts.size(); ++i) {
    t.require(pair.hit_counts[i] == static_cast<std::uint32_t>(r0.final_urban[i] + r1.final_urban[i]),
              "two-run hit count differs");
  }

  ForecastInput in{stack.urban_series.front().layer, stack.road_series.back().layer, stack.slope, stack.excluded,
                   {30, 50, 40, 20, 60}, 2000};
  const ForecastResult f = forecast(in, config, 15, 12, 3);
  for (std::size_t i = 0; i < in.start_urban.size(); ++i) {
    double prev = 0.0;
    for (const auto& m : f.maps) {
      const double p = m.values[i];
      t.require(p >= 0.0 && p <= 1.0, "probability out of [0,1]");
      t.require(p >= prev, "probability fell");
      prev = p;
    }
  }
  return t.outcome("16 runs x 10 years identical at 1 and 8 workers; 2-run mean exact; " +
                   std::to_string(f.maps.size()) + " maps bounded and monotone");
}

// 5. Recovery of known coefficients with the default schedule.
Outcome calibration_recovery() {
  synthetic::CitySpec spec;
  const CoefficientSet truth = spec.truth;
  const SelfModConfig config;
  const LayerStack stack = synthetic::make_city(spec, config);
  const std::uint64_t seed = 20100101;
  const auto schedule = default_schedule();
  SweepOptions sweep;
  sweep.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const CalibrationResult result = calibrate(stack, schedule, config, seed, sweep);

  const CalibrationReport& final_report = result.reports.back();
  const PhaseConfig& final_phase = final_report.phase;
  const CalibrationData data = CalibrationData::prepare(stack, final_phase.resolution_divisor);
  const double truth_ls = evaluate_coefficients(data, truth, config, final_phase.mc_runs, seed).leesallee;
  const double best_ls = final_report.best().metrics.leesallee;
  const double threshold = truth_ls - 0.05;

  Tally t;
  t.require(best_ls >= threshold, "best leesallee " + num(best_ls) + " < truth " + num(truth_ls) + " - 0.05");

  // Some final-phase set that reaches the threshold must sit within one
  // final-phase step of the recovered set on every axis.
  const auto best = result.best.as_array();
  std::size_t qualifying = 0;
  bool near = false;
  for (const auto& r : final_report.ranked) {
    if (r.metrics.leesallee < threshold) continue;
    ++qualifying;
    const auto c = r.coeffs.as_array();
    bool all = true;
    for (std::size_t k = 0; k < 5; ++k) {
      const int step = axis_step(final_phase.ranges[k], final_phase.max_axis_values);
      all = all && std::abs(best[k] - c[k]) <= step;
    }
    near = near || all;
  }
  t.require(near, "no qualifying set within one final step of the best");

  std::string steps;
  for (std::size_t k = 0; k < 5; ++k) {
    steps += (k ? "," : "") + std::to_string(axis_step(final_phase.ranges[k], final_phase.max_axis_values));
  }
  return t.outcome("best " + to_string(result.best) + " leesallee " + num(best_ls) + ", truth " + to_string(truth) +
                   " leesallee " + num(truth_ls) + ", " + std::to_string(qualifying) +
                   " final sets reach the threshold, final steps " + steps);
}

// 6. Scenario ordering over paired seeds.
Outcome scenario_ordering() {
  synthetic::CitySpec spec;
  spec.core_radius = 10;  // one dominant patch plus 2x2 villages
  spec.villages = 8;
  const LayerStack stack = synthetic::make_seed_city(spec);
  const BinaryLayer& seed_urban = stack.urban_series.front().layer;
  const std::vector<std::size_t> patches = [&] {
    auto sizes = testing::flood_fill_sizes(seed_urban);
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
  }();

  const CoefficientSet coeffs{20, 60, 40, 30, 50};
  const SelfModConfig config;
  const std::vector<ScenarioSpec> scenarios{{"baseline", Policy::baseline, std::nullopt, 1, 2},
                                            {"compact", Policy::compact, std::size_t{10}, 1, 2},
                                            {"polycentric", Policy::polycentric, std::nullopt, 1, 2}};
  const int seeds = 20;
  const int horizon = 20;
  int baseline_ge_compact = 0;
  int baseline_ge_poly = 0;
  double mean_rate[3] = {0, 0, 0};
  for (int s = 1; s <= seeds; ++s) {
    double area[3] = {0, 0, 0};
    for (std::size_t k = 0; k < 3; ++k) {
      ForecastInput in{seed_urban,
                       stack.road_series.back().layer,
                       stack.slope,
                       build_exclusion(scenarios[k], seed_urban, stack.excluded, stack.slope, config.critical_slope),
                       coeffs,
                       2000};
      const ForecastResult f = forecast(in, config, horizon, 1, static_cast<std::uint64_t>(s), scenarios[k].name);
      area[k] = f.report.years.back().area;
      for (const auto& y : f.report.years) mean_rate[k] += y.grw_rate / (seeds * horizon);
    }
    baseline_ge_compact += area[0] >= area[1];
    baseline_ge_poly += area[0] >= area[2];
  }
  Tally t;
  const int needed = (95 * seeds + 99) / 100;
  t.require(baseline_ge_compact >= needed,
            "baseline >= compact in " + std::to_string(baseline_ge_compact) + "/" + std::to_string(seeds));
  t.require(baseline_ge_poly >= needed,
            "baseline >= polycentric in " + std::to_string(baseline_ge_poly) + "/" + std::to_string(seeds));
  t.require(mean_rate[0] > mean_rate[1],
            "mean grw_rate baseline " + num(mean_rate[0]) + " <= compact " + num(mean_rate[1]));
  return t.outcome(std::to_string(patches.size()) + " seed patches (largest " + std::to_string(patches.front()) +
                   "); baseline >= compact " + std::to_string(baseline_ge_compact) + "/20, >= polycentric " +
                   std::to_string(baseline_ge_poly) + "/20; mean grw_rate " + num(mean_rate[0]) + " / " +
                   num(mean_rate[1]) + " / " + num(mean_rate[2]));
}

// 7. Self-modification bounds, dead band and boom decay.
Outcome self_modification() {
  Tally t;
  const SelfModConfig config;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coeff(0.0, 100.0);
  std::uniform_real_distribution<double> rate(0.0, 20.0);
  std::uniform_int_distribution<int> age(0, 40);
  for (int k = 0; k < 10000; ++k) {
    const CoefficientSet c{coeff(gen), coeff(gen), coeff(gen), coeff(gen), coeff(gen)};
    // Rates drawn either side of both thresholds.
    const double g = k % 2 ? config.critical_high + rate(gen) : config.critical_low * rate(gen) / 20.0;
    t.require(apply_self_modification(c, g, config, age(gen)).in_range(), "out of range at application " +
                                                                              std::to_string(k));
  }
  for (int k = 0; k < 1000; ++k) {
    const CoefficientSet c{coeff(gen), coeff(gen), coeff(gen), coeff(gen), coeff(gen)};
    const double g = config.critical_low + (config.critical_high - config.critical_low) * (k + 0.5) / 1000.0;
    t.require(apply_self_modification(c, g, config, age(gen)) == c, "dead band changed a set");
  }

  // A sustained boom on small coefficients, so nothing clamps.
  CoefficientSet c{1, 1, 1, 50, 1};
  SelfModState state;
  std::string trace;
  for (int year = 0; year < 15; ++year) {
    const CoefficientSet next = self_modify(c, config.critical_high + 1.0, config, state);
    const double multiplier = next.dispersion / c.dispersion;
    const double expected = std::max(1.0, config.boom - 0.01 * year);
    t.require(std::abs(multiplier - expected) <= 1e-12,
              "year " + std::to_string(year) + " multiplier " + num(multiplier, 6));
    if (year < 12) trace += (trace.empty() ? "" : " ") + num(multiplier, 2);
    c = next;
  }
  return t.outcome("10^4 applications in range, dead band fixed, boom multipliers " + trace);
}

// 8. CLI output trees are reproducible across runs and worker counts.
Outcome cli_reproducibility() {
  testing::TempDir dir("acceptance_cli");
  const fs::path ini = synthetic::write_project(
      synthetic::make_city({}), dir.path(),
      "[calibration]\nphases = coarse, final\nforecast_mc = 4\n\n"
      "[phase:coarse]\nstep = 50\ndivisor = 2\nmc = 2\n\n"
      "[phase:final]\nstep = 10\ndivisor = 1\nmc = 3\nmax_axis_values = 3\n\n"
      "[forecast]\nyears = 10\nmc = 6\n");
  Tally t;
  std::vector<std::vector<std::pair<std::string, std::string>>> trees;
  const int jobs[] = {1, 1, 4};
  for (int k = 0; k < 3; ++k) {
    const fs::path out = dir / ("run" + std::to_string(k));
    std::ostringstream sink;
    cli::CalibrateOptions copt;
    copt.jobs = jobs[k];
    copt.quiet = true;
    copt.out_dir = out;
    cli::ForecastOptions fopt;
    fopt.jobs = jobs[k];
    fopt.out_dir = out;
    t.require(cli::cmd_calibrate(ini, copt, sink, sink) == 0, "calibrate failed: " + sink.str());
    t.require(cli::cmd_forecast(ini, fopt, sink, sink) == 0, "forecast failed: " + sink.str());
    trees.push_back(testing::tree_contents(out));
  }
  t.require(trees[0].size() > 60, "output tree has only " + std::to_string(trees[0].size()) + " files");
  t.require(trees[0] == trees[1], "two runs at --jobs 1 differ");
  t.require(trees[0] == trees[2], "--jobs 1 and --jobs 4 differ");
  std::size_t bytes = 0;
  for (const auto& [name, content] : trees[0]) bytes += content.size();
  return t.outcome(std::to_string(trees[0].size()) + " files, " + std::to_string(bytes) +
                   " bytes identical across 2 runs and --jobs 1/4");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"growth-rate arithmetic", growth_rate_arithmetic},
      {"accounting identities", accounting_identities},
      {"metric oracles", metric_oracles},
      {"monte carlo contracts", monte_carlo_contracts},
      {"calibration recovery", calibration_recovery},
      {"scenario ordering", scenario_ordering},
      {"self-modification", self_modification},
      {"cli reproducibility", cli_reproducibility},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[k].first << "): " << o.detail
              << " [" << num(secs, 1) << " s]" << std::endl;
  }
  return failed ? 1 : 0;
}
