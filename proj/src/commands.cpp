#include "sleuth/commands.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sleuth/calibration.hpp"
#include "sleuth/config.hpp"
#include "sleuth/error.hpp"
#include "sleuth/metrics.hpp"
#include "sleuth/scenario.hpp"

namespace sleuth::cli {

namespace fs = std::filesystem;

namespace {

// Maps exceptions onto exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

ProjectConfig read_config(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path.string());
  try {
    return load_config(path);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

LayerStack read_layers(const ProjectConfig& cfg) {
  try {
    return load_layers(cfg);
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

void require_clean(const LayerStack& stack) {
  const auto violations = validate(stack, 1);
  if (!violations.empty()) {
    throw ValidationError(to_string(violations.front()) + " (run 'validate' for the full list)");
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

std::string fixed(double v) { return format_fixed(v); }

}  // namespace

int cmd_validate(const fs::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProjectConfig cfg = read_config(config);
    LayerStack stack;
    try {
      stack = load_layers(cfg);
    } catch (const Error& e) {
      err << "violation: " << e.what() << '\n';
      return static_cast<int>(kValidationFailure);
    }

    out << "layer,year,dims,cells\n";
    out << "slope,," << to_string(stack.slope.dims()) << ',' << stack.slope.size() << '\n';
    out << "excluded,," << to_string(stack.excluded.dims()) << ',' << stack.excluded.count() << '\n';
    if (stack.hillshade) out << "hillshade,," << to_string(stack.hillshade->dims()) << ",\n";
    for (const auto& r : stack.road_series) {
      out << "roads," << r.year << ',' << to_string(r.layer.dims()) << ',' << r.layer.count() << '\n';
    }
    for (const auto& u : stack.urban_series) {
      out << "urban," << u.year << ',' << to_string(u.layer.dims()) << ',' << u.layer.count() << '\n';
    }
    const double fraction =
        stack.excluded.size() ? static_cast<double>(stack.excluded.count()) / stack.excluded.size() : 0.0;
    out << "exclusion_fraction," << fixed(fraction) << '\n';

    const auto violations = validate(stack);
    for (const auto& v : violations) err << "violation: " << to_string(v) << '\n';
    if (!violations.empty()) {
      out << "status,invalid (" << violations.size() << " violations)\n";
      return static_cast<int>(kValidationFailure);
    }
    out << "status,ok\n";
    return static_cast<int>(kOk);
  });
}

int cmd_calibrate(const fs::path& config, const CalibrateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.jobs < 1) throw UsageError("--jobs must be >= 1");
    const ProjectConfig cfg = read_config(config);
    std::vector<PhaseConfig> schedule = cfg.schedule;
    if (options.phases) {
      if (*options.phases < 1 || *options.phases > static_cast<int>(schedule.size())) {
        throw UsageError("--phases must be between 1 and " + std::to_string(schedule.size()));
      }
      schedule.resize(static_cast<std::size_t>(*options.phases));
      if (schedule.back().resolution_divisor != 1) {
        throw UsageError("--phases " + std::to_string(*options.phases) + " ends on phase '" + schedule.back().name +
                         "', which does not run at full resolution");
      }
    }
    const LayerStack stack = read_layers(cfg);
    require_clean(stack);
    const std::uint64_t seed = options.seed.value_or(cfg.seed);
    const fs::path dir = options.out_dir.value_or(cfg.output.directory);

    SweepOptions sweep;
    sweep.jobs = options.jobs;
    std::size_t phase_index = 0;
    if (!options.quiet) {
      sweep.progress = [&](std::size_t done, std::size_t total) {
        if (done == total || done % 50 == 0) {
          err << "phase " << phase_index + 1 << ": " << done << '/' << total << '\n';
        }
        if (done == total) ++phase_index;
      };
    }
    const CalibrationResult result = calibrate(stack, schedule, cfg.engine, seed, sweep);
    const CoefficientSet derived =
        derive_forecast_coefficients(result.best, stack, cfg.engine, cfg.forecast_derivation_mc, seed, options.jobs);

    // Everything is computed before anything is written, and a failed write
    // removes what this run created.
    std::vector<std::pair<fs::path, std::string>> files;
    std::ostringstream summary;
    for (std::size_t k = 0; k < result.reports.size(); ++k) {
      const auto& report = result.reports[k];
      std::ostringstream csv;
      write_report_csv(csv, report);
      files.emplace_back(dir / ("phase" + std::to_string(k + 1) + "_report.csv"), csv.str());
      summary << "[phase" << k + 1 << "]\n"
              << "name = " << report.phase.name << '\n'
              << "resolution_divisor = " << report.phase.resolution_divisor << '\n'
              << "mc_runs = " << report.phase.mc_runs << '\n'
              << "sets = " << report.ranked.size() << '\n'
              << "best = " << to_string(report.best().coeffs) << '\n'
              << "leesallee = " << fixed(report.best().metrics.leesallee) << "\n\n";
    }
    summary << "[best]\n"
            << "coefficients = " << to_string(result.best) << '\n'
            << "leesallee = " << fixed(result.reports.back().best().metrics.leesallee) << "\n\n"
            << "[forecast]\n"
            << "coefficients = " << to_string(derived) << '\n'
            << "seed = " << seed << '\n';
    files.emplace_back(dir / "best_coefficients.txt", summary.str());

    fs::create_directories(dir);
    std::vector<fs::path> written;
    try {
      for (const auto& [path, content] : files) {
        write_file(path, content);
        written.push_back(path);
      }
    } catch (...) {
      for (const auto& p : written) fs::remove(p);
      throw;
    }

    for (std::size_t k = 0; k < result.reports.size(); ++k) {
      const auto& report = result.reports[k];
      out << "phase " << k + 1 << " (" << report.phase.name << "): " << report.ranked.size() << " sets, best "
          << to_string(report.best().coeffs) << " leesallee " << fixed(report.best().metrics.leesallee) << '\n';
    }
    out << "best coefficients: " << to_string(result.best) << '\n'
        << "forecast coefficients: " << to_string(derived) << '\n'
        << "wrote " << files.size() << " files to " << dir.string() << '\n';
    return static_cast<int>(kOk);
  });
}

namespace {

CoefficientSet forecast_coefficients(const ProjectConfig& cfg, const fs::path& dir) {
  if (cfg.forecast.coefficients) return *cfg.forecast.coefficients;
  const fs::path summary = dir / "best_coefficients.txt";
  if (!fs::exists(summary)) {
    throw UsageError("no forecast coefficients: set [forecast] coefficients or run 'calibrate' first (" +
                     summary.string() + " missing)");
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(summary.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(summary.string() + ": " + e.message());
  }
  const auto text = tree.get_optional<std::string>("forecast.coefficients");
  if (!text) throw ParseError(summary.string() + ": missing [forecast] coefficients");
  return parse_coefficients(*text);
}

}  // namespace

int cmd_forecast(const fs::path& config, const ForecastOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.jobs < 1) throw UsageError("--jobs must be >= 1");
    if (options.years && *options.years < 1) throw UsageError("--years must be >= 1");
    if (options.mc && *options.mc < 1) throw UsageError("--mc must be >= 1");
    const ProjectConfig cfg = read_config(config);

    std::vector<ScenarioSpec> chosen;
    if (options.scenario == "all") {
      chosen = cfg.scenarios;
    } else {
      for (const auto& s : cfg.scenarios)
        if (s.name == options.scenario) chosen.push_back(s);
      if (chosen.empty()) {
        std::string names;
        for (const auto& s : cfg.scenarios) names += (names.empty() ? "" : ", ") + s.name;
        throw UsageError("unknown scenario '" + options.scenario + "'; configured: " + names);
      }
    }

    const fs::path dir = options.out_dir.value_or(cfg.output.directory);
    const CoefficientSet coeffs = forecast_coefficients(cfg, dir);
    const LayerStack stack = read_layers(cfg);
    if (stack.urban_series.empty()) throw ValidationError("no urban layers configured");
    if (stack.road_series.empty()) throw ValidationError("no road layers configured");
    const auto& start = stack.urban_series.back();
    const int years = options.years.value_or(cfg.forecast.years);
    const int mc = options.mc.value_or(cfg.forecast.mc_runs);
    const std::uint64_t seed = options.seed.value_or(cfg.seed);

    std::vector<ForecastReport> reports;
    for (const auto& spec : chosen) {
      ForecastInput input{start.layer,
                          stack.roads_for(start.year),
                          stack.slope,
                          build_exclusion(spec, start.layer, stack.excluded, stack.slope, cfg.engine.critical_slope),
                          coeffs,
                          start.year};
      ForecastResult result = forecast(input, cfg.engine, years, mc, seed, spec.name, options.jobs);
      const fs::path sdir = dir / spec.name;
      fs::create_directories(sdir);
      for (const auto& map : result.maps) {
        const std::string stem = "prob_" + std::to_string(map.year);
        if (cfg.output.pgm) write_probability_map(map.values, sdir / (stem + ".pgm"), GridFormat::pgm);
        if (cfg.output.ascii) write_probability_map(map.values, sdir / (stem + ".asc"), GridFormat::ascii);
      }
      std::ostringstream csv;
      write_forecast_csv(csv, result.report);
      write_file(sdir / "report.csv", csv.str());
      const auto& last = result.report.years.back();
      out << spec.name << ": " << result.maps.size() << " maps " << result.maps.front().year << '-'
          << result.maps.back().year << ", final area " << fixed(last.area) << ", grw_rate " << fixed(last.grw_rate)
          << '\n';
      reports.push_back(std::move(result.report));
    }

    if (options.scenario == "all") {
      const ScenarioComparison comparison = compare_scenarios(reports);
      std::ostringstream csv;
      write_comparison_csv(csv, comparison);
      write_file(dir / "comparison.csv", csv.str());
      out << "ranking by final grw_rate:";
      for (std::size_t k : comparison.ranking) out << ' ' << comparison.scenarios[k];
      out << '\n';
    }
    return static_cast<int>(kOk);
  });
}

namespace {

// Binary cells, or a probability map thresholded at 0.5.
BinaryLayer read_extent(const fs::path& path) {
  const RasterData raw = read_raster(path);
  const double scale = raw.format == GridFormat::pgm ? 255.0 : 1.0;
  bool binary = true;
  for (std::size_t i = 0; i < raw.values.size() && binary; ++i) {
    binary = raw.nodata[i] || raw.values[i] == 0.0 || raw.values[i] == scale || raw.values[i] == 1.0;
  }
  BinaryLayer layer(raw.dims);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    if (raw.nodata[i]) continue;
    layer[i] = binary ? raw.values[i] > 0.0 : raw.values[i] / scale >= 0.5;
  }
  return layer;
}

void check_dims(const GridDims& expected, const fs::path& reference, const GridDims& got, const fs::path& file) {
  if (expected != got) {
    throw ValidationError(file.string() + " is " + to_string(got) + " but " + reference.string() + " is " +
                          to_string(expected));
  }
}

}  // namespace

int cmd_metrics(const MetricsOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.modeled.empty() || options.modeled.size() != options.actual.size()) {
      throw UsageError("give the same number (>= 1) of modeled and actual layers");
    }
    const std::size_t n = options.modeled.size();
    if (!options.years.empty() && options.years.size() != n) throw UsageError("--years needs one year per layer");
    const fs::path& reference = options.actual.front();
    std::vector<BinaryLayer> modeled;
    std::vector<Dated<BinaryLayer>> actual;
    for (std::size_t i = 0; i < n; ++i) {
      const int year = options.years.empty() ? static_cast<int>(i) + 1 : options.years[i];
      actual.push_back({year, read_binary_layer(options.actual[i])});
      modeled.push_back(read_extent(options.modeled[i]));
      check_dims(actual.front().layer.dims(), reference, actual.back().layer.dims(), options.actual[i]);
      check_dims(actual.front().layer.dims(), reference, modeled.back().dims(), options.modeled[i]);
    }
    const GridDims dims = actual.front().layer.dims();

    if (n == 1) {
      out << "leesallee\n" << fixed(lee_sallee(modeled.front(), actual.front().layer)) << '\n';
      return static_cast<int>(kOk);
    }

    SlopeLayer slope(dims);
    BinaryLayer excluded(dims);
    if (options.slope) {
      slope = read_slope_layer(*options.slope);
      check_dims(dims, reference, slope.dims(), *options.slope);
    }
    if (options.excluded) {
      excluded = read_binary_layer(*options.excluded);
      check_dims(dims, reference, excluded.dims(), *options.excluded);
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (actual[i].year <= actual[i - 1].year) throw UsageError("--years must be strictly increasing");
    }
    const ControlSeries controls = ControlSeries::from_layers(actual, slope, excluded);

    // A single-run "ensemble" whose yearly statistics are the modeled layers.
    EnsembleResult ensemble;
    ensemble.start_year = actual.front().year - 1;
    ensemble.n_runs = 1;
    ensemble.dims = dims;
    std::size_t next = 0;
    for (int y = actual.front().year; y <= actual.back().year; ++y) {
      if (actual[next].year < y) ++next;
      const UrbanMeasures m = measure_urban(modeled[next], slope, excluded);
      GrowthCycleStats s;
      s.year = y;
      s.area = m.area;
      s.edges = m.edges;
      s.num_clusters = m.clusters;
      s.mean_cluster_size = m.mean_cluster_size;
      s.mean_slope = m.mean_slope;
      s.pct_urban = m.pct_urban;
      s.xmean = m.xmean;
      s.ymean = m.ymean;
      s.rad = m.rad;
      ensemble.mean_stats.push_back(s);
    }
    ensemble.hit_counts.assign(dims.size(), 0);
    for (std::size_t i = 0; i < dims.size(); ++i) ensemble.hit_counts[i] = modeled.back()[i];

    const MetricVector v = metric_vector(ensemble, controls, actual.back().layer);
    const auto values = v.as_array();
    for (std::size_t k = 0; k < values.size(); ++k) out << (k ? "," : "") << MetricVector::kNames[k];
    out << '\n';
    for (std::size_t k = 0; k < values.size(); ++k) out << (k ? "," : "") << fixed(values[k]);
    out << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_convert(const fs::path& input, const fs::path& output, LayerKind kind, std::optional<GridFormat> format,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!fs::exists(input)) throw UsageError("input not found: " + input.string());
    if (fs::exists(output) && fs::equivalent(input, output)) throw UsageError("output would overwrite the input");
    const GridFormat target = format.value_or(format_for_path(output));
    const AnyLayer layer = read_grid(input, kind);
    write_grid(layer, output, target);
    out << "wrote " << output.string() << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace sleuth::cli
