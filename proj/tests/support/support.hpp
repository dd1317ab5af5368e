#pragma once

// Shared fixtures and brute-force oracles for the test suites. The oracles are
// deliberately naive so they can be checked by eye.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sleuth/grid.hpp"

namespace testing {

inline sleuth::BinaryLayer random_layer(sleuth::GridDims dims, double p, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(p);
  sleuth::BinaryLayer layer(dims);
  for (std::size_t i = 0; i < layer.size(); ++i) layer[i] = coin(gen) ? 1 : 0;
  return layer;
}

inline sleuth::SlopeLayer random_slope(sleuth::GridDims dims, int max, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> d(0, max);
  sleuth::SlopeLayer layer(dims);
  for (std::size_t i = 0; i < layer.size(); ++i) layer[i] = static_cast<std::uint8_t>(d(gen));
  return layer;
}

inline sleuth::BinaryLayer layer_from(std::vector<std::string> rows) {
  sleuth::BinaryLayer layer({static_cast<int>(rows.size()), static_cast<int>(rows.front().size())});
  for (int r = 0; r < layer.rows(); ++r)
    for (int c = 0; c < layer.cols(); ++c) layer.at(r, c) = rows[r][c] == '#' ? 1 : 0;
  return layer;
}

// Component count by repeated depth-first flooding over all 8 neighbours.
inline std::vector<std::size_t> flood_fill_sizes(const sleuth::BinaryLayer& layer) {
  std::vector<int> seen(layer.size(), 0);
  std::vector<std::size_t> sizes;
  for (int r = 0; r < layer.rows(); ++r) {
    for (int c = 0; c < layer.cols(); ++c) {
      if (!layer.test(r, c) || seen[layer.dims().index(r, c)]) continue;
      std::size_t size = 0;
      std::vector<std::pair<int, int>> stack{{r, c}};
      seen[layer.dims().index(r, c)] = 1;
      while (!stack.empty()) {
        auto [y, x] = stack.back();
        stack.pop_back();
        ++size;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = y + dy, nx = x + dx;
            if (!layer.dims().contains(ny, nx) || !layer.test(ny, nx)) continue;
            auto& s = seen[layer.dims().index(ny, nx)];
            if (!s) {
              s = 1;
              stack.push_back({ny, nx});
            }
          }
      }
      sizes.push_back(size);
    }
  }
  return sizes;
}

inline sleuth::BinaryLayer brute_dilate(const sleuth::BinaryLayer& layer, int radius) {
  sleuth::BinaryLayer out(layer.dims());
  for (int r = 0; r < layer.rows(); ++r)
    for (int c = 0; c < layer.cols(); ++c)
      for (int y = 0; y < layer.rows(); ++y)
        for (int x = 0; x < layer.cols(); ++x)
          if (layer.test(y, x) && std::abs(y - r) <= radius && std::abs(x - c) <= radius) out.set(r, c);
  return out;
}

inline int moore_count(const sleuth::BinaryLayer& layer, int r, int c) {
  int n = 0;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc)
      if ((dr || dc) && layer.dims().contains(r + dr, c + dc) && layer.test(r + dr, c + dc)) ++n;
  return n;
}

inline std::size_t brute_lee_sallee_num(const sleuth::BinaryLayer& a, const sleuth::BinaryLayer& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] && b[i]);
  return n;
}
inline std::size_t brute_lee_sallee_den(const sleuth::BinaryLayer& a, const sleuth::BinaryLayer& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] || b[i]);
  return n;
}

// Textbook OLS: r^2 = 1 - SSE/SST of modeled regressed on actual.
inline double ols_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double b = sxy / sxx;
  const double a = my - b * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sse += (y[i] - a - b * x[i]) * (y[i] - a - b * x[i]);
  return 1.0 - sse / syy;
}

// area, edges, clusters, mean cluster size, mean slope, pct_urban, xmean,
// ymean, rad of one layer, each computed by direct scanning.
struct BruteMeasures {
  double area = 0, edges = 0, clusters = 0, cluster_size = 0, slope = 0, pct = 0, xmean = 0, ymean = 0, rad = 0;
};

inline BruteMeasures brute_measures(const sleuth::BinaryLayer& u, const sleuth::SlopeLayer& slope,
                                    const sleuth::BinaryLayer& excluded) {
  BruteMeasures m;
  double open = 0, sx = 0, sy = 0, ss = 0;
  for (int r = 0; r < u.rows(); ++r)
    for (int c = 0; c < u.cols(); ++c) {
      if (!excluded.test(r, c)) open += 1;
      if (!u.test(r, c)) continue;
      m.area += 1;
      sx += c;
      sy += r;
      ss += slope.at(r, c);
      const bool interior = r > 0 && c > 0 && r + 1 < u.rows() && c + 1 < u.cols() && u.test(r - 1, c) &&
                            u.test(r + 1, c) && u.test(r, c - 1) && u.test(r, c + 1);
      if (!interior) m.edges += 1;
    }
  if (m.area == 0) return m;
  const auto sizes = flood_fill_sizes(u);
  m.clusters = static_cast<double>(sizes.size());
  m.cluster_size = m.area / m.clusters;
  m.slope = ss / m.area;
  m.pct = 100.0 * m.area / open;
  m.xmean = sx / m.area;
  m.ymean = sy / m.area;
  double vx = 0, vy = 0;
  for (int r = 0; r < u.rows(); ++r)
    for (int c = 0; c < u.cols(); ++c)
      if (u.test(r, c)) vx += (c - m.xmean) * (c - m.xmean), vy += (r - m.ymean) * (r - m.ymean);
  m.rad = std::sqrt(vx / m.area + vy / m.area);
  return m;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("sleuth_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Every regular file under `root`, relative path -> bytes.
inline std::vector<std::pair<std::string, std::string>> tree_contents(const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.emplace_back(std::filesystem::relative(e.path(), root).string(), slurp(e.path()));
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace testing
