#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sleuth/grid.hpp"

namespace sleuth {

// Coarsens by `factor` in both axes. Output dims are ceil(rows/factor) x
// ceil(cols/factor). A binary output cell is set iff any covered cell is set.
BinaryLayer downsample(const BinaryLayer& layer, int factor);
// Slope blocks take the arithmetic mean of the covered cells, rounded half up.
SlopeLayer downsample(const SlopeLayer& layer, int factor);

// 8-connected components of a binary layer. Labels are assigned in row-major
// discovery order starting at 1; 0 is background.
struct PatchSet {
  GridDims dims;
  std::vector<std::int32_t> labels;
  std::vector<std::size_t> sizes;  // sizes[id - 1]

  std::size_t count() const { return sizes.size(); }
  std::size_t size_of(std::int32_t id) const { return sizes.at(static_cast<std::size_t>(id - 1)); }
  // Label of the largest patch (lowest label on ties), or 0 when empty.
  std::int32_t largest() const;
  double mean_size() const;
  BinaryLayer mask(std::int32_t id) const;
};

PatchSet connected_components(const BinaryLayer& layer);

// Chebyshev-ball dilation: a cell is set iff some set cell lies within
// `radius` rows and `radius` columns of it.
BinaryLayer dilate(const BinaryLayer& layer, int radius);

// Set cells with at least one 4-neighbour that is unset or off-grid.
std::size_t edge_pixel_count(const BinaryLayer& layer);

struct CentroidStats {
  double xmean = 0.0;  // mean column
  double ymean = 0.0;  // mean row
  double std_x = 0.0;  // population standard deviations
  double std_y = 0.0;
  double rad = 0.0;    // sqrt(std_x^2 + std_y^2)
};

// Throws std::domain_error when the layer has no set cell.
CentroidStats centroid_stats(const BinaryLayer& layer);

// The per-year urban form measures shared by growth statistics and the
// historical control series.
struct UrbanMeasures {
  double area = 0.0;
  double edges = 0.0;
  double clusters = 0.0;
  double mean_cluster_size = 0.0;
  double mean_slope = 0.0;
  double pct_urban = 0.0;  // 100 * urban / non-excluded cells
  double xmean = 0.0;
  double ymean = 0.0;
  double rad = 0.0;
};

// Empty layers yield all-zero measures.
UrbanMeasures measure_urban(const BinaryLayer& urban, const SlopeLayer& slope, const BinaryLayer& excluded);

}  // namespace sleuth
