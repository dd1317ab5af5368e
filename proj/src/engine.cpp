#include "sleuth/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "sleuth/error.hpp"
#include "sleuth/raster_ops.hpp"

namespace sleuth {

const BinaryLayer& Landscape::roads_for(int year) const {
  if (roads.empty()) throw std::logic_error("landscape has no road layer");
  const BinaryLayer* current = &roads.front().layer;
  for (const auto& entry : roads) {
    if (entry.year <= year) current = &entry.layer;
  }
  return *current;
}

void Landscape::validate() const {
  if (roads.empty()) throw ValidationError("landscape: at least one road layer is required");
  if (excluded.dims() != slope.dims()) {
    throw ValidationError("landscape: excluded layer is " + to_string(excluded.dims()) + ", slope is " +
                          to_string(slope.dims()));
  }
  for (const auto& r : roads) {
    if (r.layer.dims() != slope.dims()) {
      throw ValidationError("landscape: road layer " + std::to_string(r.year) + " is " + to_string(r.layer.dims()) +
                            ", slope is " + to_string(slope.dims()));
    }
  }
}

void SimState::validate() const {
  if (!landscape) throw ValidationError("sim state: no landscape");
  landscape->validate();
  if (urban.dims() != landscape->dims()) {
    throw ValidationError("sim state: urban layer is " + to_string(urban.dims()) + ", landscape is " +
                          to_string(landscape->dims()));
  }
  if (!coeffs.in_range()) throw ValidationError("sim state: coefficients outside [0,100]: " + to_string(coeffs));
  const GridDims dims = urban.dims();
  for (std::size_t i = 0; i < urban.size(); ++i) {
    if (urban[i] && landscape->excluded[i]) {
      throw ValidationError("sim state: urban cell (row " + std::to_string(dims.row_of(i)) + ", col " +
                            std::to_string(dims.col_of(i)) + ") is excluded");
    }
  }
}

SimState make_state(std::shared_ptr<const Landscape> landscape, BinaryLayer urban, const CoefficientSet& coeffs,
                    int year) {
  SimState state{std::move(landscape), std::move(urban), coeffs, {}, year};
  state.validate();
  return state;
}

double growth_rate(double grw_pix, double area) { return area > 0.0 ? 100.0 * grw_pix / area : 0.0; }

double slope_accept_probability(double slope_pct, double slope_resistance, double critical_slope) {
  if (slope_pct >= critical_slope) return 0.0;
  const double base = (critical_slope - slope_pct) / critical_slope;
  return std::clamp(std::pow(base, slope_resistance / 50.0), 0.0, 1.0);
}

SlopeGate::SlopeGate(double slope_resistance, double critical_slope) {
  for (std::size_t s = 0; s < table_.size(); ++s) {
    table_[s] = slope_accept_probability(static_cast<double>(s), slope_resistance, critical_slope);
  }
}

bool SlopeGate::pass(std::uint8_t slope, Rng& rng) const {
  const double p = table_[slope];
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return rng.uniform() < p;
}

int spontaneous_attempts(const GridDims& dims, double dispersion) {
  const double diagonal = std::hypot(static_cast<double>(dims.rows), static_cast<double>(dims.cols));
  return static_cast<int>(std::lround((dispersion / 100.0) * 0.005 * diagonal * 100.0));
}

int road_search_radius(const GridDims& dims, double road_gravity) {
  // Guard the ceiling against representation error in the product.
  const double r = (road_gravity / 100.0) * static_cast<double>(dims.rows + dims.cols) / 16.0;
  return static_cast<int>(std::ceil(r - 1e-9));
}

GrowthFrame::GrowthFrame(BinaryLayer& urban_, const BinaryLayer& roads_, const SlopeLayer& slope_,
                         const BinaryLayer& excluded_, const CoefficientSet& coeffs_, double critical_slope)
    : urban(urban_),
      roads(roads_),
      slope(slope_),
      excluded(excluded_),
      coeffs(coeffs_),
      gate(coeffs_.slope_resistance, critical_slope) {}

bool GrowthFrame::try_urbanize(std::size_t index, Rng& rng) {
  if (urban[index] || excluded[index]) return false;
  if (!gate.pass(slope[index], rng)) return false;
  urban[index] = 1;
  return true;
}

std::size_t spontaneous_growth(GrowthFrame& frame, Rng& rng, CellList& out) {
  const int attempts = spontaneous_attempts(frame.urban.dims(), frame.coeffs.dispersion);
  const std::size_t n = frame.urban.size();
  std::size_t grown = 0;
  for (int k = 0; k < attempts; ++k) {
    const std::size_t i = rng.index(n);
    if (frame.try_urbanize(i, rng)) {
      out.push_back(i);
      ++grown;
    }
  }
  return grown;
}

std::size_t urbanize_around(GrowthFrame& frame, std::size_t center, bool skip_roads, Rng& rng, CellList& out) {
  const GridDims dims = frame.urban.dims();
  const int r = dims.row_of(center);
  const int c = dims.col_of(center);
  std::array<std::size_t, 8> candidates{};
  std::size_t n = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (!dims.contains(r + dr, c + dc)) continue;
      const std::size_t j = dims.index(r + dr, c + dc);
      if (frame.urban[j] || frame.excluded[j]) continue;
      if (skip_roads && frame.roads[j]) continue;
      candidates[n++] = j;
    }
  }
  std::size_t grown = 0;
  for (std::size_t k = 0; k < n && grown < 2; ++k) {
    std::swap(candidates[k], candidates[k + rng.index(n - k)]);
    if (frame.try_urbanize(candidates[k], rng)) {
      out.push_back(candidates[k]);
      ++grown;
    }
  }
  return grown;
}

std::size_t new_spreading_centers(GrowthFrame& frame, std::span<const std::size_t> spontaneous, Rng& rng,
                                  CellList& out) {
  if (frame.coeffs.breed <= 0.0) return 0;
  const GridDims dims = frame.urban.dims();
  const double p = frame.coeffs.breed / 100.0;
  std::size_t grown = 0;
  for (const std::size_t center : spontaneous) {
    const int r = dims.row_of(center);
    const int c = dims.col_of(center);
    int non_urban = 0;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        // Off-grid neighbours count as non-urban.
        if (!dims.contains(r + dr, c + dc) || !frame.urban.test(r + dr, c + dc)) ++non_urban;
      }
    }
    if (non_urban < 2) continue;
    if (!rng.chance(p)) continue;
    grown += urbanize_around(frame, center, false, rng, out);
  }
  return grown;
}

std::size_t edge_growth(GrowthFrame& frame, const BinaryLayer& cycle_start, Rng& rng, CellList& out) {
  if (frame.coeffs.spread <= 0.0) return 0;
  require_same_dims(cycle_start.dims(), frame.urban.dims(), "edge_growth");
  const GridDims dims = frame.urban.dims();
  const int rows = dims.rows;
  const int cols = dims.cols;
  const double p = frame.coeffs.spread / 100.0;
  const std::uint8_t* start = cycle_start.cells().data();
  // Vertical 3-cell sums of the cycle-start layer for the previous, current
  // and next column; the Moore count is their total minus the centre.
  auto column_sum = [&](int r, int c) -> int {
    if (c < 0 || c >= cols) return 0;
    int s = start[static_cast<std::size_t>(r) * cols + c];
    if (r > 0) s += start[static_cast<std::size_t>(r - 1) * cols + c];
    if (r + 1 < rows) s += start[static_cast<std::size_t>(r + 1) * cols + c];
    return s;
  };
  std::size_t grown = 0;
  for (int r = 0; r < rows; ++r) {
    int left = 0;
    int mid = column_sum(r, 0);
    for (int c = 0; c < cols; ++c) {
      const int right = column_sum(r, c + 1);
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      const int neighbours = left + mid + right - start[i];
      left = mid;
      mid = right;
      if (neighbours < 3 || frame.urban[i] || frame.excluded[i]) continue;
      if (!rng.chance(p)) continue;
      if (frame.try_urbanize(i, rng)) {
        out.push_back(i);
        ++grown;
      }
    }
  }
  return grown;
}

std::optional<std::size_t> find_nearest_road(const BinaryLayer& roads, std::size_t from, int radius) {
  const GridDims dims = roads.dims();
  const int r0 = dims.row_of(from);
  const int c0 = dims.col_of(from);
  for (int d = 0; d <= radius; ++d) {
    std::optional<std::size_t> best;
    long best_dist = std::numeric_limits<long>::max();
    auto consider = [&](int r, int c) {
      if (!dims.contains(r, c) || !roads.test(r, c)) return;
      const long dist = static_cast<long>(r - r0) * (r - r0) + static_cast<long>(c - c0) * (c - c0);
      if (dist < best_dist) {
        best_dist = dist;
        best = dims.index(r, c);
      }
    };
    for (int r = r0 - d; r <= r0 + d; ++r) {
      if (r == r0 - d || r == r0 + d) {
        for (int c = c0 - d; c <= c0 + d; ++c) consider(r, c);
      } else {
        consider(r, c0 - d);
        consider(r, c0 + d);
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

std::size_t road_walk(const BinaryLayer& roads, std::size_t start, int steps, Rng& rng) {
  const GridDims dims = roads.dims();
  std::size_t current = start;
  std::optional<std::size_t> previous;
  std::array<std::size_t, 8> options{};
  for (int s = 0; s < steps; ++s) {
    const int r = dims.row_of(current);
    const int c = dims.col_of(current);
    std::size_t n = 0;
    bool has_previous = false;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        if (!dims.contains(r + dr, c + dc) || !roads.test(r + dr, c + dc)) continue;
        const std::size_t j = dims.index(r + dr, c + dc);
        if (previous && j == *previous) {
          has_previous = true;
          continue;
        }
        options[n++] = j;
      }
    }
    if (n == 0) {
      if (!has_previous) break;
      options[n++] = *previous;
    }
    previous = current;
    current = options[rng.index(n)];
  }
  return current;
}

std::size_t road_influenced_growth(GrowthFrame& frame, std::span<const std::size_t> newly_urbanized, Rng& rng,
                                   CellList& out) {
  const long trips = std::lround(frame.coeffs.breed);
  if (trips <= 0 || newly_urbanized.empty() || !frame.roads.any()) return 0;
  const int radius = road_search_radius(frame.urban.dims(), frame.coeffs.road_gravity);
  const int steps = static_cast<int>(std::lround(frame.coeffs.dispersion));
  std::size_t grown = 0;
  for (long t = 0; t < trips; ++t) {
    const std::size_t pick = newly_urbanized[rng.index(newly_urbanized.size())];
    const auto road = find_nearest_road(frame.roads, pick, radius);
    if (!road) continue;
    const std::size_t terminus = road_walk(frame.roads, *road, steps, rng);
    grown += urbanize_around(frame, terminus, true, rng, out);
  }
  return grown;
}

GrowthCycleStats run_cycle(SimState& state, Rng& rng, const SelfModConfig& config, StatsDetail detail) {
  const Landscape& land = *state.landscape;
  const BinaryLayer& roads = land.roads_for(state.year);
  const std::size_t area_before = state.urban.count();
  const BinaryLayer cycle_start = state.urban;

  GrowthFrame frame(state.urban, roads, land.slope, land.excluded, state.coeffs, config.critical_slope);
  CellList newly;
  const std::size_t sng = spontaneous_growth(frame, rng, newly);
  const std::size_t spontaneous_end = newly.size();
  CellList centers_out;
  std::size_t og = new_spreading_centers(frame, std::span(newly).first(spontaneous_end), rng, centers_out);
  newly.insert(newly.end(), centers_out.begin(), centers_out.end());
  og += edge_growth(frame, cycle_start, rng, newly);
  CellList road_out;
  const std::size_t rt = road_influenced_growth(frame, newly, rng, road_out);

  GrowthCycleStats stats;
  stats.sng = static_cast<double>(sng);
  stats.og = static_cast<double>(og);
  stats.rt = static_cast<double>(rt);
  const std::size_t grw_pix = sng + og + rt;
  const std::size_t area = area_before + grw_pix;
  assert(area == state.urban.count());
  stats.grw_pix = static_cast<double>(grw_pix);
  stats.area = static_cast<double>(area);
  stats.grw_rate = growth_rate(stats.grw_pix, stats.area);
  if (detail == StatsDetail::full) {
    const UrbanMeasures m = measure_urban(state.urban, land.slope, land.excluded);
    stats.xmean = m.xmean;
    stats.ymean = m.ymean;
    stats.rad = m.rad;
    stats.pct_urban = m.pct_urban;
    stats.num_clusters = m.clusters;
    stats.mean_cluster_size = m.mean_cluster_size;
    stats.edges = m.edges;
    stats.mean_slope = m.mean_slope;
  }
  state.coeffs = self_modify(state.coeffs, stats.grw_rate, config, state.selfmod);
  stats.coeffs = state.coeffs;
  stats.year = ++state.year;
  return stats;
}

}  // namespace sleuth
