#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sleuth/layer_stack.hpp"
#include "sleuth/monte_carlo.hpp"
#include "sleuth/raster_ops.hpp"

namespace sleuth {

// Coefficient of determination of the least-squares fit of `modeled` on
// `actual`. Returns 0 when either series is constant.
double r2(std::span<const double> actual, std::span<const double> modeled);

// |modeled AND actual| / |modeled OR actual|; 1 when both are empty.
double lee_sallee(const BinaryLayer& modeled, const BinaryLayer& actual);

// min(m, a) / max(m, a). Requires actual > 0.
double compare_metric(double modeled_final_area, double actual_final_area);

struct ControlYear {
  int year = 0;
  UrbanMeasures measures;
};

struct ControlSeries {
  std::vector<ControlYear> years;

  // Measures each dated layer. Requires >= 2 layers in increasing year order.
  static ControlSeries from_layers(std::span<const Dated<BinaryLayer>> urban, const SlopeLayer& slope,
                                   const BinaryLayer& excluded);
};

struct MetricVector {
  double compare = 0.0;
  double pop = 0.0;
  double edges = 0.0;
  double clusters = 0.0;
  double cluster_size = 0.0;
  double leesallee = 0.0;
  double slope = 0.0;
  double pct_urban = 0.0;
  double xmean = 0.0;
  double ymean = 0.0;
  double rad = 0.0;

  static constexpr std::array<std::string_view, 11> kNames{
      "compare", "pop", "edges", "clusters", "cluster_size", "leesallee",
      "slope", "pct_urban", "xmean", "ymean", "rad"};

  std::array<double, 11> as_array() const {
    return {compare, pop, edges, clusters, cluster_size, leesallee, slope, pct_urban, xmean, ymean, rad};
  }

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

// Cells urban in at least `threshold` of the runs.
BinaryLayer ensemble_extent(const EnsembleResult& ensemble, double threshold = 0.5);

// Scores an ensemble against the control years. Every r^2 field regresses the
// ensemble-mean series on the actual series over the control years; compare
// and leesallee use the last control year, leesallee on the >= 0.5 extent.
MetricVector metric_vector(const EnsembleResult& ensemble, const ControlSeries& controls,
                           const BinaryLayer& final_actual);

// CSV helpers: 5 coefficient columns then the 11 metrics.
void write_metric_header(std::ostream& os);
void write_metric_row(std::ostream& os, const CoefficientSet& coeffs, const MetricVector& metrics);

// Fixed-point decimal used by every CSV writer (six places).
std::string format_fixed(double value, int places = 6);

}  // namespace sleuth
