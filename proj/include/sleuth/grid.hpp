#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sleuth {

struct GridDims {
  int rows = 0;
  int cols = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  bool contains(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c);
  }
  int row_of(std::size_t i) const { return static_cast<int>(i / static_cast<std::size_t>(cols)); }
  int col_of(std::size_t i) const { return static_cast<int>(i % static_cast<std::size_t>(cols)); }

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

std::string to_string(const GridDims& dims);

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Row-major raster of T. Dimensions are fixed at construction.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(GridDims dims, T fill = T{}) : dims_(check_dims(dims)), cells_(dims.size(), fill) {}
  Grid(GridDims dims, std::vector<T> cells) : dims_(check_dims(dims)), cells_(std::move(cells)) {
    if (cells_.size() != dims_.size()) {
      throw std::invalid_argument("grid: cell count " + std::to_string(cells_.size()) +
                                  " does not match " + to_string(dims_));
    }
  }

  const GridDims& dims() const { return dims_; }
  int rows() const { return dims_.rows; }
  int cols() const { return dims_.cols; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  T& operator[](std::size_t i) { return cells_[i]; }
  const T& operator[](std::size_t i) const { return cells_[i]; }
  T& at(int r, int c) { return cells_[dims_.index(r, c)]; }
  const T& at(int r, int c) const { return cells_[dims_.index(r, c)]; }

  std::span<T> cells() { return cells_; }
  std::span<const T> cells() const { return cells_; }

  bool operator==(const Grid&) const = default;

 protected:
  static GridDims check_dims(GridDims dims) {
    if (dims.rows < 1 || dims.cols < 1) {
      throw std::invalid_argument("grid: dimensions must be positive, got " + to_string(dims));
    }
    return dims;
  }

  GridDims dims_;
  std::vector<T> cells_;
};

// Cells restricted to {0,1}: urban, road, excluded and patch masks.
class BinaryLayer : public Grid<std::uint8_t> {
 public:
  BinaryLayer() = default;
  explicit BinaryLayer(GridDims dims, std::uint8_t fill = 0);
  BinaryLayer(GridDims dims, std::vector<std::uint8_t> cells);

  bool test(int r, int c) const { return at(r, c) != 0; }
  void set(int r, int c, bool v = true) { at(r, c) = v ? 1 : 0; }
  std::size_t count() const;
  bool any() const;
};

// Integer percent slope, 0 (flat) to 100.
class SlopeLayer : public Grid<std::uint8_t> {
 public:
  static constexpr std::uint8_t kMax = 100;

  SlopeLayer() = default;
  explicit SlopeLayer(GridDims dims, std::uint8_t fill = 0);
  SlopeLayer(GridDims dims, std::vector<std::uint8_t> cells);
};

// Display-only 8-bit grayscale (hillshade).
using GrayLayer = Grid<std::uint8_t>;

using RealGrid = Grid<double>;

void require_same_dims(const GridDims& a, const GridDims& b, const std::string& what);

BinaryLayer operator|(const BinaryLayer& a, const BinaryLayer& b);
BinaryLayer operator&(const BinaryLayer& a, const BinaryLayer& b);
// Cells set in `a` and not in `b`.
BinaryLayer difference(const BinaryLayer& a, const BinaryLayer& b);
BinaryLayer complement(const BinaryLayer& a);
bool is_subset(const BinaryLayer& a, const BinaryLayer& b);

}  // namespace sleuth
