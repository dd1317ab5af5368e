#include "sleuth/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "sleuth/metrics.hpp"
#include "sleuth/monte_carlo.hpp"
#include "sleuth/raster_ops.hpp"

namespace sleuth {

Policy parse_policy(const std::string& text) {
  if (text == "baseline") return Policy::baseline;
  if (text == "compact") return Policy::compact;
  if (text == "polycentric") return Policy::polycentric;
  throw std::invalid_argument("unknown policy '" + text + "' (expected baseline, compact or polycentric)");
}

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::baseline:
      return "baseline";
    case Policy::compact:
      return "compact";
    case Policy::polycentric:
      return "polycentric";
  }
  return "?";
}

void ScenarioSpec::validate() const {
  if (name.empty()) throw std::invalid_argument("scenario: empty name");
  if (small_patch_threshold && *small_patch_threshold < 1) {
    throw std::invalid_argument("scenario '" + name + "': small_patch_threshold must be >= 1");
  }
  if (buffer_radius < 0 || boundary_ring_width < 0) {
    throw std::invalid_argument("scenario '" + name + "': radii must be >= 0");
  }
}

std::size_t resolve_small_patch_threshold(const ScenarioSpec& spec, const BinaryLayer& seed_urban) {
  if (spec.small_patch_threshold) return *spec.small_patch_threshold;
  const auto one_percent = static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(seed_urban.count())));
  return std::max<std::size_t>(1, one_percent);
}

namespace {

// The patch plus every background cell not 4-connected to the grid border.
BinaryLayer fill_holes(const BinaryLayer& patch) {
  const GridDims dims = patch.dims();
  BinaryLayer outside(dims);
  std::vector<std::size_t> stack;
  auto push = [&](int r, int c) {
    if (!dims.contains(r, c)) return;
    const std::size_t i = dims.index(r, c);
    if (patch[i] || outside[i]) return;
    outside[i] = 1;
    stack.push_back(i);
  };
  for (int r = 0; r < dims.rows; ++r) {
    push(r, 0);
    push(r, dims.cols - 1);
  }
  for (int c = 0; c < dims.cols; ++c) {
    push(0, c);
    push(dims.rows - 1, c);
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int r = dims.row_of(i);
    const int c = dims.col_of(i);
    push(r - 1, c);
    push(r + 1, c);
    push(r, c - 1);
    push(r, c + 1);
  }
  return complement(outside);
}

}  // namespace

BinaryLayer build_exclusion(const ScenarioSpec& spec, const BinaryLayer& seed_urban, const BinaryLayer& base_excluded,
                            const SlopeLayer& slope, double critical_slope) {
  spec.validate();
  require_same_dims(seed_urban.dims(), base_excluded.dims(), "build_exclusion");
  require_same_dims(seed_urban.dims(), slope.dims(), "build_exclusion");

  BinaryLayer steep(slope.dims());
  for (std::size_t i = 0; i < slope.size(); ++i) steep[i] = slope[i] >= critical_slope ? 1 : 0;
  BinaryLayer excluded = base_excluded | difference(steep, seed_urban);
  if (spec.policy == Policy::baseline) return excluded;

  if (!seed_urban.any()) {
    throw std::domain_error("scenario '" + spec.name + "': seed urban layer is empty, no patches to classify");
  }
  const PatchSet patches = connected_components(seed_urban);
  if (spec.policy == Policy::compact) {
    const std::size_t threshold = resolve_small_patch_threshold(spec, seed_urban);
    BinaryLayer small(seed_urban.dims());
    for (std::size_t i = 0; i < small.size(); ++i) {
      const auto id = patches.labels[i];
      if (id != 0 && patches.size_of(id) < threshold) small[i] = 1;
    }
    return excluded | difference(dilate(small, spec.buffer_radius), seed_urban);
  }
  const BinaryLayer filled = fill_holes(patches.mask(patches.largest()));
  const BinaryLayer ring = difference(dilate(filled, spec.boundary_ring_width), filled);
  return excluded | difference(ring, seed_urban);
}

ForecastResult forecast(const ForecastInput& input, const SelfModConfig& config, int horizon_years, int n_mc,
                        std::uint64_t base_seed, const std::string& scenario_name, int jobs) {
  if (horizon_years < 1) throw std::invalid_argument("forecast: horizon must be >= 1 year");
  if (n_mc < 1) throw std::invalid_argument("forecast: n_mc must be >= 1");
  auto land = std::make_shared<Landscape>();
  land->slope = input.slope;
  land->excluded = input.excluded;
  land->roads.push_back({input.start_year, input.roads});
  const SimState initial = make_state(std::move(land), input.start_urban, input.coeffs, input.start_year);

  MonteCarloOptions options;
  options.jobs = jobs;
  options.yearly_hits = true;
  const EnsembleResult ensemble = monte_carlo(initial, config, horizon_years, n_mc, base_seed, options);

  ForecastResult result;
  const double n = static_cast<double>(n_mc);
  for (std::size_t y = 0; y < ensemble.yearly_hits.size(); ++y) {
    ProbabilityMap map{input.start_year + 1 + static_cast<int>(y), RealGrid(ensemble.dims)};
    const auto& hits = ensemble.yearly_hits[y];
    for (std::size_t i = 0; i < hits.size(); ++i) map.values[i] = static_cast<double>(hits[i]) / n;
    result.maps.push_back(std::move(map));
  }
  result.report.scenario = scenario_name;
  result.report.coeffs = input.coeffs;
  result.report.start_year = input.start_year;
  result.report.years = ensemble.mean_stats;
  return result;
}

void write_forecast_csv(std::ostream& os, const ForecastReport& report) {
  os << "year,diffuse,spread,breed,slp_res,rd_grav,sng,og,rt,area,xmean,ymean,pct_urban,grw_rate,grw_pix\n";
  for (const auto& s : report.years) {
    os << s.year;
    for (double v : {s.coeffs.dispersion, s.coeffs.spread, s.coeffs.breed, s.coeffs.slope_resistance,
                     s.coeffs.road_gravity, s.sng, s.og, s.rt, s.area, s.xmean, s.ymean, s.pct_urban, s.grw_rate,
                     s.grw_pix}) {
      os << ',' << format_fixed(v);
    }
    os << '\n';
  }
}

ScenarioComparison compare_scenarios(std::span<const ForecastReport> reports) {
  if (reports.size() < 2) throw std::invalid_argument("compare_scenarios: need at least two reports");
  ScenarioComparison cmp;
  for (const auto& s : reports.front().years) cmp.years.push_back(s.year);
  for (const auto& report : reports) {
    std::vector<int> years;
    for (const auto& s : report.years) years.push_back(s.year);
    if (years != cmp.years) {
      throw std::invalid_argument("compare_scenarios: scenario '" + report.scenario + "' covers a different horizon");
    }
    cmp.scenarios.push_back(report.scenario);
    std::vector<double> rate;
    std::vector<double> area;
    for (const auto& s : report.years) {
      rate.push_back(s.grw_rate);
      area.push_back(s.area);
    }
    cmp.grw_rate.push_back(std::move(rate));
    cmp.area.push_back(std::move(area));
  }
  cmp.ranking.resize(reports.size());
  std::iota(cmp.ranking.begin(), cmp.ranking.end(), std::size_t{0});
  if (!cmp.years.empty()) {
    std::stable_sort(cmp.ranking.begin(), cmp.ranking.end(),
                     [&](std::size_t a, std::size_t b) { return cmp.grw_rate[a].back() > cmp.grw_rate[b].back(); });
  }
  return cmp;
}

void write_comparison_csv(std::ostream& os, const ScenarioComparison& cmp) {
  std::vector<std::size_t> rank(cmp.scenarios.size());
  for (std::size_t r = 0; r < cmp.ranking.size(); ++r) rank[cmp.ranking[r]] = r + 1;
  os << "scenario,year,area,grw_rate,final_rank\n";
  for (std::size_t s = 0; s < cmp.scenarios.size(); ++s) {
    for (std::size_t y = 0; y < cmp.years.size(); ++y) {
      os << cmp.scenarios[s] << ',' << cmp.years[y] << ',' << format_fixed(cmp.area[s][y]) << ','
         << format_fixed(cmp.grw_rate[s][y]) << ',' << rank[s] << '\n';
    }
  }
}

}  // namespace sleuth
