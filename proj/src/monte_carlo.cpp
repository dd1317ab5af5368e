#include "sleuth/monte_carlo.hpp"

#include <algorithm>
#include <stdexcept>

#include "parallel.hpp"

namespace sleuth {

const GrowthCycleStats& EnsembleResult::stats_for(int year) const {
  if (!covers(year)) throw std::invalid_argument("ensemble does not cover year " + std::to_string(year));
  return mean_stats[static_cast<std::size_t>(year - start_year - 1)];
}

bool EnsembleResult::covers(int year) const {
  return year > start_year && year <= start_year + static_cast<int>(mean_stats.size());
}

namespace {

StatsDetail detail_for(const MonteCarloOptions& options, int year) {
  if (options.detail == StatsDetail::counts) return StatsDetail::counts;
  if (options.full_stats_years.empty()) return StatsDetail::full;
  const auto& ys = options.full_stats_years;
  return std::find(ys.begin(), ys.end(), year) != ys.end() ? StatsDetail::full : StatsDetail::counts;
}

void add_into(GrowthCycleStats& sum, const GrowthCycleStats& s) {
  sum.sng += s.sng;
  sum.og += s.og;
  sum.rt += s.rt;
  sum.grw_pix += s.grw_pix;
  sum.area += s.area;
  sum.grw_rate += s.grw_rate;
  sum.xmean += s.xmean;
  sum.ymean += s.ymean;
  sum.rad += s.rad;
  sum.pct_urban += s.pct_urban;
  sum.num_clusters += s.num_clusters;
  sum.mean_cluster_size += s.mean_cluster_size;
  sum.edges += s.edges;
  sum.mean_slope += s.mean_slope;
  sum.coeffs.dispersion += s.coeffs.dispersion;
  sum.coeffs.breed += s.coeffs.breed;
  sum.coeffs.spread += s.coeffs.spread;
  sum.coeffs.slope_resistance += s.coeffs.slope_resistance;
  sum.coeffs.road_gravity += s.coeffs.road_gravity;
}

void scale(GrowthCycleStats& s, double k) {
  for (double* f : {&s.sng, &s.og, &s.rt, &s.grw_pix, &s.area, &s.grw_rate, &s.xmean, &s.ymean, &s.rad,
                    &s.pct_urban, &s.num_clusters, &s.mean_cluster_size, &s.edges, &s.mean_slope,
                    &s.coeffs.dispersion, &s.coeffs.breed, &s.coeffs.spread, &s.coeffs.slope_resistance,
                    &s.coeffs.road_gravity}) {
    *f *= k;
  }
}

}  // namespace

RunResult run_simulation(const SimState& initial, const SelfModConfig& config, int years, std::uint64_t seed,
                         const MonteCarloOptions& options, bool keep_yearly) {
  if (years < 0) throw std::invalid_argument("run_simulation: negative year count");
  SimState state = initial;
  Rng rng(seed);
  RunResult result;
  result.stats.reserve(static_cast<std::size_t>(years));
  for (int y = 0; y < years; ++y) {
    result.stats.push_back(run_cycle(state, rng, config, detail_for(options, state.year + 1)));
    if (keep_yearly) result.yearly_urban.push_back(state.urban);
  }
  result.final_coeffs = state.coeffs;
  result.final_urban = std::move(state.urban);
  return result;
}

std::vector<GrowthCycleStats> average_stats(const std::vector<std::vector<GrowthCycleStats>>& runs) {
  if (runs.empty()) return {};
  const std::size_t years = runs.front().size();
  std::vector<GrowthCycleStats> mean(years);
  for (const auto& run : runs) {
    if (run.size() != years) throw std::invalid_argument("average_stats: runs differ in length");
    for (std::size_t y = 0; y < years; ++y) add_into(mean[y], run[y]);
  }
  for (std::size_t y = 0; y < years; ++y) {
    scale(mean[y], 1.0 / static_cast<double>(runs.size()));
    mean[y].year = runs.front()[y].year;
  }
  return mean;
}

EnsembleResult monte_carlo(const SimState& initial, const SelfModConfig& config, int years, int n_runs,
                           std::uint64_t base_seed, const MonteCarloOptions& options) {
  if (n_runs < 1) throw std::invalid_argument("monte_carlo: n_runs must be >= 1");
  if (years < 0) throw std::invalid_argument("monte_carlo: negative year count");
  initial.validate();
  const auto runs = static_cast<std::size_t>(n_runs);
  const GridDims dims = initial.urban.dims();
  const std::size_t workers = detail::worker_count(runs, options.jobs);

  std::vector<std::vector<GrowthCycleStats>> stats(runs);
  std::vector<CoefficientSet> final_coeffs(runs);
  // Hit counts are integer sums, so per-worker partials merge identically in
  // any order.
  std::vector<std::vector<std::uint32_t>> hits(workers, std::vector<std::uint32_t>(dims.size(), 0));
  std::vector<std::vector<std::vector<std::uint32_t>>> yearly(workers);
  if (options.yearly_hits) {
    for (auto& w : yearly) {
      w.assign(static_cast<std::size_t>(years), std::vector<std::uint32_t>(dims.size(), 0));
    }
  }

  detail::parallel_for(runs, options.jobs, [&](std::size_t worker, std::size_t i) {
    RunResult run = run_simulation(initial, config, years, derive_seed(base_seed, i), options, options.yearly_hits);
    auto& h = hits[worker];
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += run.final_urban[k];
    if (options.yearly_hits) {
      for (std::size_t y = 0; y < run.yearly_urban.size(); ++y) {
        auto& yh = yearly[worker][y];
        const auto& layer = run.yearly_urban[y];
        for (std::size_t k = 0; k < yh.size(); ++k) yh[k] += layer[k];
      }
    }
    stats[i] = std::move(run.stats);
    final_coeffs[i] = run.final_coeffs;
  });

  EnsembleResult result;
  result.start_year = initial.year;
  result.n_runs = n_runs;
  result.dims = dims;
  result.mean_stats = average_stats(stats);
  result.final_coeffs = std::move(final_coeffs);
  result.hit_counts = std::move(hits.front());
  for (std::size_t w = 1; w < workers; ++w) {
    for (std::size_t k = 0; k < dims.size(); ++k) result.hit_counts[k] += hits[w][k];
  }
  if (options.yearly_hits) {
    result.yearly_hits = std::move(yearly.front());
    for (std::size_t w = 1; w < workers; ++w) {
      for (std::size_t y = 0; y < result.yearly_hits.size(); ++y) {
        for (std::size_t k = 0; k < dims.size(); ++k) result.yearly_hits[y][k] += yearly[w][y][k];
      }
    }
  }
  return result;
}

}  // namespace sleuth
