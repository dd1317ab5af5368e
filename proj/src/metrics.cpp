#include "sleuth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sleuth {

namespace {

// Sum of squared deviations, treated as zero when it is at the level of
// rounding noise for the series' magnitude.
bool is_constant(std::span<const double> x, double mean, double ss) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, std::abs(mean));
  return ss <= static_cast<double>(x.size()) * noise * noise;
}

}  // namespace

double r2(std::span<const double> actual, std::span<const double> modeled) {
  if (actual.size() != modeled.size()) {
    throw std::invalid_argument("r2: series lengths differ (" + std::to_string(actual.size()) + " vs " +
                                std::to_string(modeled.size()) + ")");
  }
  if (actual.size() < 2) throw std::invalid_argument("r2: need at least two points");
  const double n = static_cast<double>(actual.size());
  double ma = 0.0;
  double mm = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ma += actual[i];
    mm += modeled[i];
  }
  ma /= n;
  mm /= n;
  double saa = 0.0;
  double smm = 0.0;
  double sam = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double da = actual[i] - ma;
    const double dm = modeled[i] - mm;
    saa += da * da;
    smm += dm * dm;
    sam += da * dm;
  }
  if (is_constant(actual, ma, saa) || is_constant(modeled, mm, smm)) return 0.0;
  return std::clamp((sam * sam) / (saa * smm), 0.0, 1.0);
}

double lee_sallee(const BinaryLayer& modeled, const BinaryLayer& actual) {
  require_same_dims(modeled.dims(), actual.dims(), "lee_sallee");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < modeled.size(); ++i) {
    inter += (modeled[i] & actual[i]);
    uni += (modeled[i] | actual[i]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double compare_metric(double modeled_final_area, double actual_final_area) {
  if (!(actual_final_area > 0.0)) throw std::invalid_argument("compare_metric: actual area must be positive");
  if (modeled_final_area < 0.0) throw std::invalid_argument("compare_metric: modeled area must be non-negative");
  return std::min(modeled_final_area, actual_final_area) / std::max(modeled_final_area, actual_final_area);
}

ControlSeries ControlSeries::from_layers(std::span<const Dated<BinaryLayer>> urban, const SlopeLayer& slope,
                                         const BinaryLayer& excluded) {
  if (urban.size() < 2) throw std::invalid_argument("control series: need at least two control years");
  ControlSeries series;
  for (std::size_t i = 0; i < urban.size(); ++i) {
    if (i > 0 && urban[i].year <= urban[i - 1].year) {
      throw std::invalid_argument("control series: years must be strictly increasing");
    }
    series.years.push_back({urban[i].year, measure_urban(urban[i].layer, slope, excluded)});
  }
  return series;
}

BinaryLayer ensemble_extent(const EnsembleResult& ensemble, double threshold) {
  BinaryLayer out(ensemble.dims);
  const double n = static_cast<double>(ensemble.n_runs);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(ensemble.hit_counts[i]) >= threshold * n ? 1 : 0;
  }
  return out;
}

MetricVector metric_vector(const EnsembleResult& ensemble, const ControlSeries& controls,
                           const BinaryLayer& final_actual) {
  if (controls.years.size() < 2) throw std::invalid_argument("metric_vector: need at least two control years");
  const std::size_t n = controls.years.size();
  std::vector<GrowthCycleStats> modeled;
  modeled.reserve(n);
  for (const auto& cy : controls.years) {
    if (!ensemble.covers(cy.year)) {
      throw std::invalid_argument("metric_vector: ensemble does not cover control year " + std::to_string(cy.year));
    }
    modeled.push_back(ensemble.stats_for(cy.year));
  }
  if (ensemble.start_year + static_cast<int>(ensemble.mean_stats.size()) != controls.years.back().year) {
    throw std::invalid_argument("metric_vector: ensemble must stop at the last control year");
  }
  auto score = [&](auto actual_field, auto modeled_field) {
    std::vector<double> a(n);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = actual_field(controls.years[i].measures);
      m[i] = modeled_field(modeled[i]);
    }
    return r2(a, m);
  };
  MetricVector v;
  v.compare = compare_metric(modeled.back().area, controls.years.back().measures.area);
  v.pop = score([](const UrbanMeasures& x) { return x.area; }, [](const GrowthCycleStats& s) { return s.area; });
  v.edges = score([](const UrbanMeasures& x) { return x.edges; }, [](const GrowthCycleStats& s) { return s.edges; });
  v.clusters = score([](const UrbanMeasures& x) { return x.clusters; },
                     [](const GrowthCycleStats& s) { return s.num_clusters; });
  v.cluster_size = score([](const UrbanMeasures& x) { return x.mean_cluster_size; },
                         [](const GrowthCycleStats& s) { return s.mean_cluster_size; });
  v.leesallee = lee_sallee(ensemble_extent(ensemble), final_actual);
  v.slope = score([](const UrbanMeasures& x) { return x.mean_slope; },
                  [](const GrowthCycleStats& s) { return s.mean_slope; });
  v.pct_urban = score([](const UrbanMeasures& x) { return x.pct_urban; },
                      [](const GrowthCycleStats& s) { return s.pct_urban; });
  v.xmean = score([](const UrbanMeasures& x) { return x.xmean; }, [](const GrowthCycleStats& s) { return s.xmean; });
  v.ymean = score([](const UrbanMeasures& x) { return x.ymean; }, [](const GrowthCycleStats& s) { return s.ymean; });
  v.rad = score([](const UrbanMeasures& x) { return x.rad; }, [](const GrowthCycleStats& s) { return s.rad; });
  return v;
}

std::string format_fixed(double value, int places) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(places);
  // Avoid "-0.000000".
  os << (value == 0.0 ? 0.0 : value);
  std::string s = os.str();
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void write_metric_header(std::ostream& os) {
  os << "diffuse,spread,breed,slp_res,rd_grav";
  for (auto name : MetricVector::kNames) os << ',' << name;
  os << '\n';
}

void write_metric_row(std::ostream& os, const CoefficientSet& coeffs, const MetricVector& metrics) {
  os << std::lround(coeffs.dispersion) << ',' << std::lround(coeffs.spread) << ',' << std::lround(coeffs.breed) << ','
     << std::lround(coeffs.slope_resistance) << ',' << std::lround(coeffs.road_gravity);
  for (double m : metrics.as_array()) os << ',' << format_fixed(m);
  os << '\n';
}

}  // namespace sleuth
