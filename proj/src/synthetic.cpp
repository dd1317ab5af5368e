#include "sleuth/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sleuth/engine.hpp"
#include "sleuth/error.hpp"
#include "sleuth/monte_carlo.hpp"
#include "sleuth/raster_io.hpp"

namespace sleuth::synthetic {

namespace fs = std::filesystem;

namespace {

struct Terrain {
  SlopeLayer slope;
  BinaryLayer excluded;
  BinaryLayer roads_early;
  BinaryLayer roads_late;
  BinaryLayer seed_urban;
};

Terrain make_terrain(const CitySpec& spec) {
  const int n = spec.size;
  if (n < 24) throw std::invalid_argument("synthetic city needs size >= 24");
  if (spec.core_radius < 1 || spec.core_radius > n / 6) throw std::invalid_argument("core_radius out of range");
  const GridDims dims{n, n};
  const double c = (n - 1) / 2.0;

  Terrain t{SlopeLayer(dims), BinaryLayer(dims), BinaryLayer(dims), BinaryLayer(dims), BinaryLayer(dims)};

  // Rolling ground under 20%, rising to a hill in the bottom-right corner.
  const double hill_r = n * 0.3;
  for (int r = 0; r < n; ++r) {
    for (int col = 0; col < n; ++col) {
      double s = 6.0 + 5.0 * std::sin(r * 0.35) * std::cos(col * 0.27);
      const double dh = std::hypot(n - 1 - r, n - 1 - col);
      if (dh < hill_r) s += 75.0 * (1.0 - dh / hill_r);
      t.slope.at(r, col) = static_cast<std::uint8_t>(std::clamp(std::lround(s), 0L, 100L));
    }
  }

  // Lake in the lower-left quadrant.
  const double lake_r = n / 12.0;
  const double lr = n * 0.72;
  const double lc = n * 0.25;
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col)
      if (std::hypot(r - lr, col - lc) <= lake_r) t.excluded.at(r, col) = 1;

  // Cross through the centre; the later network adds a square ring road.
  const int mid = n / 2;
  for (int i = 0; i < n; ++i) {
    t.roads_early.at(mid, i) = 1;
    t.roads_early.at(i, mid) = 1;
  }
  t.roads_late = t.roads_early;
  const int ring = n / 4;
  for (int i = mid - ring; i <= mid + ring; ++i) {
    t.roads_late.at(mid - ring, i) = 1;
    t.roads_late.at(mid + ring, i) = 1;
    t.roads_late.at(i, mid - ring) = 1;
    t.roads_late.at(i, mid + ring) = 1;
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (t.excluded[i]) t.roads_early[i] = t.roads_late[i] = 0;
  }

  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col)
      if (std::hypot(r - c, col - c) <= spec.core_radius) t.seed_urban.at(r, col) = 1;

  // Villages: 2x2 patches on flat, dry land away from the core.
  Rng rng(spec.seed);
  int placed = 0;
  for (int attempt = 0; placed < spec.villages && attempt < 10000; ++attempt) {
    const int r = static_cast<int>(rng.index(static_cast<std::size_t>(n - 3))) + 1;
    const int col = static_cast<int>(rng.index(static_cast<std::size_t>(n - 3))) + 1;
    if (std::hypot(r - c, col - c) < spec.core_radius + 6) continue;
    bool ok = true;
    for (int dr = -1; dr <= 2 && ok; ++dr)
      for (int dc = -1; dc <= 2 && ok; ++dc)
        ok = !t.excluded.at(r + dr, col + dc) && !t.seed_urban.at(r + dr, col + dc) &&
             t.slope.at(r + dr, col + dc) < 25;
    if (!ok) continue;
    for (int dr = 0; dr < 2; ++dr)
      for (int dc = 0; dc < 2; ++dc) t.seed_urban.at(r + dr, col + dc) = 1;
    ++placed;
  }
  return t;
}

GrayLayer shade(const SlopeLayer& slope) {
  GrayLayer g(slope.dims());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<std::uint8_t>(230 - 2 * slope[i]);
  return g;
}

std::vector<Dated<BinaryLayer>> road_series(const Terrain& t, const std::vector<int>& years) {
  const int switch_year = years[years.size() / 2];
  return {{years.front(), t.roads_early}, {switch_year, t.roads_late}};
}

}  // namespace

LayerStack make_seed_city(const CitySpec& spec) {
  if (spec.years.size() < 2) throw std::invalid_argument("synthetic city needs at least two years");
  Terrain t = make_terrain(spec);
  LayerStack stack;
  stack.road_series = road_series(t, spec.years);
  stack.urban_series.push_back({spec.years.front(), t.seed_urban});
  stack.hillshade = shade(t.slope);
  stack.slope = std::move(t.slope);
  stack.excluded = std::move(t.excluded);
  return stack;
}

LayerStack make_city(const CitySpec& spec, const SelfModConfig& config) {
  if (!std::is_sorted(spec.years.begin(), spec.years.end()) ||
      std::adjacent_find(spec.years.begin(), spec.years.end()) != spec.years.end()) {
    throw std::invalid_argument("synthetic city years must be strictly increasing");
  }
  LayerStack stack = make_seed_city(spec);
  auto land = std::make_shared<Landscape>();
  land->slope = stack.slope;
  land->excluded = stack.excluded;
  land->roads = stack.road_series;

  const SimState initial = make_state(land, stack.urban_series.front().layer, spec.truth, spec.years.front());
  MonteCarloOptions options;
  options.detail = StatsDetail::counts;
  const RunResult run =
      run_simulation(initial, config, spec.years.back() - spec.years.front(), spec.seed, options, true);
  for (std::size_t k = 1; k < spec.years.size(); ++k) {
    const auto offset = static_cast<std::size_t>(spec.years[k] - spec.years.front() - 1);
    stack.urban_series.push_back({spec.years[k], run.yearly_urban.at(offset)});
  }
  return stack;
}

fs::path write_project(const LayerStack& stack, const fs::path& dir, const std::string& extra_ini) {
  fs::create_directories(dir);
  std::string urban;
  std::string roads;
  for (const auto& u : stack.urban_series) {
    const std::string name = "urban_" + std::to_string(u.year) + ".asc";
    write_grid(u.layer, dir / name, GridFormat::ascii);
    urban += (urban.empty() ? "" : ", ") + std::to_string(u.year) + ":" + name;
  }
  for (const auto& r : stack.road_series) {
    const std::string name = "roads_" + std::to_string(r.year) + ".asc";
    write_grid(r.layer, dir / name, GridFormat::ascii);
    roads += (roads.empty() ? "" : ", ") + std::to_string(r.year) + ":" + name;
  }
  write_grid(stack.slope, dir / "slope.asc", GridFormat::ascii);
  write_grid(stack.excluded, dir / "excluded.asc", GridFormat::ascii);
  if (stack.hillshade) write_grid(*stack.hillshade, dir / "hillshade.pgm", GridFormat::pgm);

  const fs::path ini = dir / "project.ini";
  std::ofstream out(ini);
  if (!out) throw IoError("cannot write " + ini.string());
  out << "[dataset]\n"
      << "urban = " << urban << "\n"
      << "roads = " << roads << "\n"
      << "slope = slope.asc\n"
      << "excluded = excluded.asc\n";
  if (stack.hillshade) out << "hillshade = hillshade.pgm\n";
  if (!extra_ini.empty()) out << "\n" << extra_ini;
  if (!out) throw IoError("cannot write " + ini.string());
  return ini;
}

}  // namespace sleuth::synthetic
