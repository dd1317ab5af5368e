#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sleuth/coefficients.hpp"
#include "sleuth/grid.hpp"
#include "sleuth/layer_stack.hpp"
#include "sleuth/rng.hpp"

namespace sleuth {

// Static inputs of a simulation. Roads may change by year; the layer in force
// for a cycle starting in year y is the latest entry dated <= y (the earliest
// entry before the first date).
struct Landscape {
  SlopeLayer slope;
  BinaryLayer excluded;
  std::vector<Dated<BinaryLayer>> roads;

  GridDims dims() const { return slope.dims(); }
  const BinaryLayer& roads_for(int year) const;
  // Throws ValidationError on inconsistent dims or empty road list.
  void validate() const;
};

struct SimState {
  std::shared_ptr<const Landscape> landscape;
  BinaryLayer urban;
  CoefficientSet coeffs;
  SelfModState selfmod;
  int year = 0;

  // Throws ValidationError when an urban cell is excluded or dims disagree.
  void validate() const;
};

SimState make_state(std::shared_ptr<const Landscape> landscape, BinaryLayer urban, const CoefficientSet& coeffs,
                    int year);

struct GrowthCycleStats {
  int year = 0;
  double sng = 0.0;
  double og = 0.0;
  double rt = 0.0;
  double grw_pix = 0.0;
  double area = 0.0;
  double grw_rate = 0.0;
  double xmean = 0.0;
  double ymean = 0.0;
  double rad = 0.0;
  double pct_urban = 0.0;
  double num_clusters = 0.0;
  double mean_cluster_size = 0.0;
  double edges = 0.0;
  double mean_slope = 0.0;
  CoefficientSet coeffs;  // after this year's self-modification

  friend bool operator==(const GrowthCycleStats&, const GrowthCycleStats&) = default;
};

// Percent of this year's urban area that is new: 100 * grw_pix / area.
// Zero when area is zero.
double growth_rate(double grw_pix, double area);

// `counts` fills sng/og/rt/grw_pix/area/grw_rate only; `full` adds the
// urban-form measures (centroid, clusters, edges, slope, pct_urban).
enum class StatsDetail { counts, full };

// Probability that a cell of `slope_pct` passes the slope gate:
// ((critical - slope) / critical)^(slope_resistance / 50) below the critical
// slope, 0 at or above it.
double slope_accept_probability(double slope_pct, double slope_resistance, double critical_slope);

// Tabulated slope gate for one coefficient state.
class SlopeGate {
 public:
  SlopeGate(double slope_resistance, double critical_slope);
  double probability(std::uint8_t slope) const { return table_[slope]; }
  bool pass(std::uint8_t slope, Rng& rng) const;

 private:
  std::array<double, SlopeLayer::kMax + 1> table_{};
};

// round(dispersion * 0.005 * sqrt(rows^2 + cols^2)).
int spontaneous_attempts(const GridDims& dims, double dispersion);
// ceil((road_gravity / 100) * (rows + cols) / 16).
int road_search_radius(const GridDims& dims, double road_gravity);

// Working set of one growth cycle. Substeps urbanize cells of `urban` in
// place and append the linear indices they urbanized to their output list.
struct GrowthFrame {
  BinaryLayer& urban;
  const BinaryLayer& roads;
  const SlopeLayer& slope;
  const BinaryLayer& excluded;
  CoefficientSet coeffs;
  SlopeGate gate;

  GrowthFrame(BinaryLayer& urban, const BinaryLayer& roads, const SlopeLayer& slope, const BinaryLayer& excluded,
              const CoefficientSet& coeffs, double critical_slope);

  // Non-urban, non-excluded cell that passes the slope gate is urbanized.
  bool try_urbanize(std::size_t index, Rng& rng);
};

using CellList = std::vector<std::size_t>;

// Substep 1: random cell draws, each urbanizing a suitable cell.
std::size_t spontaneous_growth(GrowthFrame& frame, Rng& rng, CellList& out);

// Substep 2: each spontaneous cell with >= 2 non-urban Moore neighbours
// becomes a spreading center with probability breed/100 and urbanizes up to
// two of its eligible neighbours.
std::size_t new_spreading_centers(GrowthFrame& frame, std::span<const std::size_t> spontaneous, Rng& rng,
                                  CellList& out);

// Substep 3: every non-urban cell with >= 3 urban Moore neighbours in
// `cycle_start` urbanizes with probability (spread/100) x slope gate.
std::size_t edge_growth(GrowthFrame& frame, const BinaryLayer& cycle_start, Rng& rng, CellList& out);

// Substep 4: round(breed) road trips from cells urbanized earlier this cycle.
std::size_t road_influenced_growth(GrowthFrame& frame, std::span<const std::size_t> newly_urbanized, Rng& rng,
                                   CellList& out);

// Urbanizes up to two eligible Moore neighbours of `center`, visited in random
// order. Road cells are skipped when `skip_roads` is set.
std::size_t urbanize_around(GrowthFrame& frame, std::size_t center, bool skip_roads, Rng& rng, CellList& out);

// Nearest road cell within Chebyshev `radius` of `from`: the closest ring
// wins, then the smallest Euclidean distance, then row-major order.
std::optional<std::size_t> find_nearest_road(const BinaryLayer& roads, std::size_t from, int radius);

// Random walk of up to `steps` moves over 8-connected road cells, uniform
// among road neighbours and never stepping straight back unless forced.
// Returns the terminus.
std::size_t road_walk(const BinaryLayer& roads, std::size_t start, int steps, Rng& rng);

// One growth cycle: substeps 1-4 then self-modification. Advances the year.
GrowthCycleStats run_cycle(SimState& state, Rng& rng, const SelfModConfig& config,
                           StatsDetail detail = StatsDetail::full);

}  // namespace sleuth
