#include "sleuth/grid.hpp"

#include <algorithm>

namespace sleuth {

std::string to_string(const GridDims& dims) {
  return std::to_string(dims.rows) + "x" + std::to_string(dims.cols);
}

void require_same_dims(const GridDims& a, const GridDims& b, const std::string& what) {
  if (a != b) {
    throw std::invalid_argument(what + ": dimension mismatch " + to_string(a) + " vs " + to_string(b));
  }
}

BinaryLayer::BinaryLayer(GridDims dims, std::uint8_t fill) : Grid(dims, static_cast<std::uint8_t>(fill ? 1 : 0)) {}

BinaryLayer::BinaryLayer(GridDims dims, std::vector<std::uint8_t> cells) : Grid(dims, std::move(cells)) {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] > 1) {
      throw std::invalid_argument("binary layer: value " + std::to_string(cells_[i]) + " at cell " +
                                  std::to_string(i) + " is not 0 or 1");
    }
  }
}

std::size_t BinaryLayer::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool BinaryLayer::any() const {
  return std::any_of(cells_.begin(), cells_.end(), [](std::uint8_t v) { return v != 0; });
}

SlopeLayer::SlopeLayer(GridDims dims, std::uint8_t fill) : Grid(dims, fill) {
  if (fill > kMax) throw std::invalid_argument("slope layer: fill value above 100");
}

SlopeLayer::SlopeLayer(GridDims dims, std::vector<std::uint8_t> cells) : Grid(dims, std::move(cells)) {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] > kMax) {
      throw std::invalid_argument("slope layer: value " + std::to_string(cells_[i]) + " at cell " +
                                  std::to_string(i) + " outside [0,100]");
    }
  }
}

namespace {

template <typename Op>
BinaryLayer combine(const BinaryLayer& a, const BinaryLayer& b, const char* what, Op op) {
  require_same_dims(a.dims(), b.dims(), what);
  BinaryLayer out(a.dims());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]) ? 1 : 0;
  return out;
}

}  // namespace

BinaryLayer operator|(const BinaryLayer& a, const BinaryLayer& b) {
  return combine(a, b, "union", [](auto x, auto y) { return x || y; });
}

BinaryLayer operator&(const BinaryLayer& a, const BinaryLayer& b) {
  return combine(a, b, "intersection", [](auto x, auto y) { return x && y; });
}

BinaryLayer difference(const BinaryLayer& a, const BinaryLayer& b) {
  return combine(a, b, "difference", [](auto x, auto y) { return x && !y; });
}

BinaryLayer complement(const BinaryLayer& a) {
  BinaryLayer out(a.dims());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ? 0 : 1;
  return out;
}

bool is_subset(const BinaryLayer& a, const BinaryLayer& b) {
  require_same_dims(a.dims(), b.dims(), "subset");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

}  // namespace sleuth
