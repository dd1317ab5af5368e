#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sleuth/coefficients.hpp"
#include "sleuth/layer_stack.hpp"

namespace sleuth::synthetic {

// A square test city: a core patch with satellite villages, a road cross
// that gains a ring road, a lake, and a hill in one corner. Urban control
// layers are produced by simulating `truth` from the first year.
struct CitySpec {
  int size = 64;
  std::vector<int> years{2000, 2002, 2004, 2006};
  CoefficientSet truth{20, 60, 40, 30, 50};
  std::uint64_t seed = 7;
  int core_radius = 5;
  int villages = 6;
};

LayerStack make_city(const CitySpec& spec, const SelfModConfig& config = {});

// Seed-year layers only (urban_series holds one entry).
LayerStack make_seed_city(const CitySpec& spec);

// Writes layers as ASCII grids plus a project.ini pointing at them.
std::filesystem::path write_project(const LayerStack& stack, const std::filesystem::path& dir,
                                    const std::string& extra_ini = {});

}  // namespace sleuth::synthetic
