#include "sleuth/layer_stack.hpp"

#include <stdexcept>

namespace sleuth {

const BinaryLayer& LayerStack::roads_for(int year) const {
  if (road_series.empty()) throw std::logic_error("layer stack has no road layers");
  const BinaryLayer* current = &road_series.front().layer;
  for (const auto& entry : road_series) {
    if (entry.year <= year) current = &entry.layer;
  }
  return *current;
}

std::string to_string(const Violation& v) {
  std::string s = v.layer;
  if (v.year) s += " " + std::to_string(*v.year);
  if (v.cell) s += " (row " + std::to_string(v.cell->row) + ", col " + std::to_string(v.cell->col) + ")";
  return s + ": " + v.message;
}

namespace {

void check_series(const std::vector<Dated<BinaryLayer>>& series, const std::string& name, std::size_t minimum,
                  const std::string& minimum_text, const GridDims& dims, std::vector<Violation>& out) {
  if (series.size() < minimum) {
    out.push_back({name, std::nullopt, std::nullopt,
                   "found " + std::to_string(series.size()) + " dated layers; " + minimum_text});
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0 && series[i].year <= series[i - 1].year) {
      out.push_back({name, series[i].year, std::nullopt,
                     "years must be strictly increasing (follows " + std::to_string(series[i - 1].year) + ")"});
    }
    if (series[i].layer.dims() != dims) {
      out.push_back({name, series[i].year, std::nullopt,
                     "dimensions " + to_string(series[i].layer.dims()) + " differ from slope " + to_string(dims)});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const LayerStack& stack, std::size_t max_cells_per_layer) {
  std::vector<Violation> out;
  const GridDims dims = stack.slope.dims();
  check_series(stack.urban_series, "urban", kMinUrbanYears,
               "calibration requires historic urban extent for at least four time periods", dims, out);
  check_series(stack.road_series, "roads", kMinRoadYears,
               "calibration requires a transportation network for at least two time periods", dims, out);
  if (stack.excluded.dims() != dims) {
    out.push_back({"excluded", std::nullopt, std::nullopt,
                   "dimensions " + to_string(stack.excluded.dims()) + " differ from slope " + to_string(dims)});
  }
  if (stack.hillshade && stack.hillshade->dims() != dims) {
    out.push_back({"hillshade", std::nullopt, std::nullopt,
                   "dimensions " + to_string(stack.hillshade->dims()) + " differ from slope " + to_string(dims)});
  }
  if (stack.excluded.dims() == dims) {
    for (const auto& entry : stack.urban_series) {
      if (entry.layer.dims() != dims) continue;
      std::size_t reported = 0;
      std::size_t total = 0;
      for (std::size_t i = 0; i < entry.layer.size(); ++i) {
        if (entry.layer[i] && stack.excluded[i]) {
          ++total;
          if (reported < max_cells_per_layer) {
            out.push_back({"urban", entry.year, Cell{dims.row_of(i), dims.col_of(i)}, "urban cell is excluded"});
            ++reported;
          }
        }
      }
      if (total > reported) {
        out.push_back({"urban", entry.year, std::nullopt,
                       std::to_string(total - reported) + " further excluded urban cells not listed"});
      }
    }
  }
  return out;
}

}  // namespace sleuth
