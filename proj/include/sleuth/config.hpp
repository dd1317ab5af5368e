#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sleuth/calibration.hpp"
#include "sleuth/layer_stack.hpp"
#include "sleuth/scenario.hpp"

namespace sleuth {

inline constexpr std::uint64_t kDefaultSeed = 20100101;

struct DatedPath {
  int year = 0;
  std::filesystem::path file;
};

struct ForecastSettings {
  int years = 20;
  int mc_runs = 100;
  std::optional<CoefficientSet> coefficients;
};

struct OutputSettings {
  std::filesystem::path directory = "out";
  bool pgm = true;
  bool ascii = true;
};

// INI-style project file. Relative paths resolve against the file's directory.
struct ProjectConfig {
  std::filesystem::path source;
  std::vector<DatedPath> urban;
  std::vector<DatedPath> roads;
  std::filesystem::path slope;
  std::filesystem::path excluded;
  std::optional<std::filesystem::path> hillshade;

  SelfModConfig engine;
  std::uint64_t seed = kDefaultSeed;

  std::vector<PhaseConfig> schedule;
  int forecast_derivation_mc = 100;

  std::vector<ScenarioSpec> scenarios;
  ForecastSettings forecast;
  OutputSettings output;
};

// Throws ParseError (syntax, unknown keys, bad values).
ProjectConfig load_config(const std::filesystem::path& path);
ProjectConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

// Reads every referenced layer. Missing files raise IoError.
LayerStack load_layers(const ProjectConfig& config);

// Scenarios used when the file defines none: baseline, compact, polycentric.
std::vector<ScenarioSpec> default_scenarios();

// Parses "d,b,s,sr,rg".
CoefficientSet parse_coefficients(const std::string& text);

}  // namespace sleuth
