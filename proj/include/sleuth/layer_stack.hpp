#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sleuth/grid.hpp"

namespace sleuth {

template <typename Layer>
struct Dated {
  int year = 0;
  Layer layer;
};

// The historical inputs: dated urban extents and road networks plus the
// static slope, exclusion and (display-only) hillshade layers.
struct LayerStack {
  std::vector<Dated<BinaryLayer>> urban_series;
  std::vector<Dated<BinaryLayer>> road_series;
  SlopeLayer slope;
  BinaryLayer excluded;
  std::optional<GrayLayer> hillshade;

  GridDims dims() const { return slope.dims(); }
  const BinaryLayer& roads_for(int year) const;
};

inline constexpr std::size_t kMinUrbanYears = 4;
inline constexpr std::size_t kMinRoadYears = 2;

struct Violation {
  std::string layer;
  std::optional<int> year;
  std::optional<Cell> cell;
  std::string message;
};

std::string to_string(const Violation& v);

// Checks every LayerStack invariant. Cell-level violations are listed up to
// `max_cells_per_layer` per offending layer.
std::vector<Violation> validate(const LayerStack& stack, std::size_t max_cells_per_layer = 10);

}  // namespace sleuth
