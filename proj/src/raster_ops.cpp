#include "sleuth/raster_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sleuth {

namespace {

GridDims coarse_dims(const GridDims& dims, int factor) {
  if (factor < 1) throw std::invalid_argument("downsample: factor must be >= 1, got " + std::to_string(factor));
  return {(dims.rows + factor - 1) / factor, (dims.cols + factor - 1) / factor};
}

}  // namespace

BinaryLayer downsample(const BinaryLayer& layer, int factor) {
  const GridDims out_dims = coarse_dims(layer.dims(), factor);
  if (factor == 1) return layer;
  BinaryLayer out(out_dims);
  for (int r = 0; r < layer.rows(); ++r) {
    for (int c = 0; c < layer.cols(); ++c) {
      if (layer.test(r, c)) out.set(r / factor, c / factor);
    }
  }
  return out;
}

SlopeLayer downsample(const SlopeLayer& layer, int factor) {
  const GridDims out_dims = coarse_dims(layer.dims(), factor);
  if (factor == 1) return layer;
  std::vector<unsigned> sum(out_dims.size(), 0);
  std::vector<unsigned> n(out_dims.size(), 0);
  for (int r = 0; r < layer.rows(); ++r) {
    for (int c = 0; c < layer.cols(); ++c) {
      const std::size_t o = out_dims.index(r / factor, c / factor);
      sum[o] += layer.at(r, c);
      ++n[o];
    }
  }
  std::vector<std::uint8_t> cells(out_dims.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = static_cast<std::uint8_t>((2 * sum[i] + n[i]) / (2 * n[i]));
  }
  return SlopeLayer(out_dims, std::move(cells));
}

std::int32_t PatchSet::largest() const {
  std::int32_t best = 0;
  std::size_t best_size = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] > best_size) {
      best_size = sizes[i];
      best = static_cast<std::int32_t>(i + 1);
    }
  }
  return best;
}

double PatchSet::mean_size() const {
  if (sizes.empty()) return 0.0;
  std::size_t total = 0;
  for (auto s : sizes) total += s;
  return static_cast<double>(total) / static_cast<double>(sizes.size());
}

BinaryLayer PatchSet::mask(std::int32_t id) const {
  BinaryLayer out(dims);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == id) out[i] = 1;
  }
  return out;
}

PatchSet connected_components(const BinaryLayer& layer) {
  const GridDims dims = layer.dims();
  PatchSet patches{dims, std::vector<std::int32_t>(layer.size(), 0), {}};
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < layer.size(); ++seed) {
    if (!layer[seed] || patches.labels[seed] != 0) continue;
    const auto id = static_cast<std::int32_t>(patches.sizes.size() + 1);
    std::size_t size = 0;
    patches.labels[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      ++size;
      const int r = dims.row_of(i);
      const int c = dims.col_of(i);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int nr = r + dr;
          const int nc = c + dc;
          if ((dr == 0 && dc == 0) || !dims.contains(nr, nc)) continue;
          const std::size_t j = dims.index(nr, nc);
          if (layer[j] && patches.labels[j] == 0) {
            patches.labels[j] = id;
            stack.push_back(j);
          }
        }
      }
    }
    patches.sizes.push_back(size);
  }
  return patches;
}

BinaryLayer dilate(const BinaryLayer& layer, int radius) {
  if (radius < 0) throw std::invalid_argument("dilate: radius must be >= 0");
  if (radius == 0) return layer;
  const GridDims dims = layer.dims();
  // Separable max filter: rows, then columns, each via a prefix count.
  BinaryLayer rows_pass(dims);
  std::vector<int> prefix(static_cast<std::size_t>(std::max(dims.rows, dims.cols)) + 1);
  for (int r = 0; r < dims.rows; ++r) {
    prefix[0] = 0;
    for (int c = 0; c < dims.cols; ++c) prefix[c + 1] = prefix[c] + layer.at(r, c);
    for (int c = 0; c < dims.cols; ++c) {
      const int lo = std::max(0, c - radius);
      const int hi = std::min(dims.cols - 1, c + radius);
      if (prefix[hi + 1] - prefix[lo] > 0) rows_pass.set(r, c);
    }
  }
  BinaryLayer out(dims);
  for (int c = 0; c < dims.cols; ++c) {
    prefix[0] = 0;
    for (int r = 0; r < dims.rows; ++r) prefix[r + 1] = prefix[r] + rows_pass.at(r, c);
    for (int r = 0; r < dims.rows; ++r) {
      const int lo = std::max(0, r - radius);
      const int hi = std::min(dims.rows - 1, r + radius);
      if (prefix[hi + 1] - prefix[lo] > 0) out.set(r, c);
    }
  }
  return out;
}

std::size_t edge_pixel_count(const BinaryLayer& layer) {
  const GridDims dims = layer.dims();
  auto urban = [&](int r, int c) { return dims.contains(r, c) && layer.test(r, c); };
  std::size_t edges = 0;
  for (int r = 0; r < dims.rows; ++r) {
    for (int c = 0; c < dims.cols; ++c) {
      if (!layer.test(r, c)) continue;
      if (!urban(r - 1, c) || !urban(r + 1, c) || !urban(r, c - 1) || !urban(r, c + 1)) ++edges;
    }
  }
  return edges;
}

CentroidStats centroid_stats(const BinaryLayer& layer) {
  const GridDims dims = layer.dims();
  double n = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < layer.size(); ++i) {
    if (!layer[i]) continue;
    n += 1.0;
    sx += dims.col_of(i);
    sy += dims.row_of(i);
  }
  if (n == 0.0) throw std::domain_error("centroid_stats: layer has no set cell");
  CentroidStats s;
  s.xmean = sx / n;
  s.ymean = sy / n;
  double vx = 0.0;
  double vy = 0.0;
  for (std::size_t i = 0; i < layer.size(); ++i) {
    if (!layer[i]) continue;
    const double dx = dims.col_of(i) - s.xmean;
    const double dy = dims.row_of(i) - s.ymean;
    vx += dx * dx;
    vy += dy * dy;
  }
  s.std_x = std::sqrt(vx / n);
  s.std_y = std::sqrt(vy / n);
  s.rad = std::sqrt(s.std_x * s.std_x + s.std_y * s.std_y);
  return s;
}

UrbanMeasures measure_urban(const BinaryLayer& urban, const SlopeLayer& slope, const BinaryLayer& excluded) {
  require_same_dims(urban.dims(), slope.dims(), "measure_urban");
  require_same_dims(urban.dims(), excluded.dims(), "measure_urban");
  UrbanMeasures m;
  std::size_t area = 0;
  std::size_t available = 0;
  double slope_sum = 0.0;
  for (std::size_t i = 0; i < urban.size(); ++i) {
    if (!excluded[i]) ++available;
    if (urban[i]) {
      ++area;
      slope_sum += slope[i];
    }
  }
  if (area == 0) return m;
  m.area = static_cast<double>(area);
  m.edges = static_cast<double>(edge_pixel_count(urban));
  const PatchSet patches = connected_components(urban);
  m.clusters = static_cast<double>(patches.count());
  m.mean_cluster_size = patches.mean_size();
  m.mean_slope = slope_sum / m.area;
  m.pct_urban = available > 0 ? 100.0 * m.area / static_cast<double>(available) : 0.0;
  const CentroidStats c = centroid_stats(urban);
  m.xmean = c.xmean;
  m.ymean = c.ymean;
  m.rad = c.rad;
  return m;
}

}  // namespace sleuth
