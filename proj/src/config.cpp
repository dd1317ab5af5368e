#include "sleuth/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "sleuth/error.hpp"
#include "sleuth/raster_io.hpp"

namespace sleuth {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

  ParseError error(const std::string& key, const std::string& what) const {
    return ParseError("config [" + name_ + "] " + key + ": " + what);
  }

  std::optional<std::string> get(const std::string& key) {
    for (const auto& [k, v] : tree_) {
      if (k == key) {
        used_.insert(k);
        return trim(v.data());
      }
    }
    return std::nullopt;
  }

  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v || v->empty()) throw error(key, "required");
    return *v;
  }

  template <typename T>
  std::optional<T> number(const std::string& key) {
    const auto text = get(key);
    if (!text) return std::nullopt;
    T value{};
    const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc() || ptr != text->data() + text->size()) throw error(key, "invalid number '" + *text + "'");
    return value;
  }

  std::optional<bool> boolean(const std::string& key) {
    const auto text = get(key);
    if (!text) return std::nullopt;
    if (*text == "true" || *text == "on" || *text == "yes" || *text == "1") return true;
    if (*text == "false" || *text == "off" || *text == "no" || *text == "0") return false;
    throw error(key, "expected true/false, got '" + *text + "'");
  }

  // Every key must have been read.
  void finish() const {
    for (const auto& [k, v] : tree_) {
      if (!used_.count(k)) throw error(k, "unknown key");
    }
  }

 private:
  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> used_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<DatedPath> parse_dated(Section& s, const std::string& key, const fs::path& base) {
  std::vector<DatedPath> out;
  for (const auto& item : split(s.require(key), ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw s.error(key, "expected year:path, got '" + item + "'");
    const std::string year_text = trim(item.substr(0, colon));
    int year = 0;
    const auto [ptr, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), year);
    if (ec != std::errc() || ptr != year_text.data() + year_text.size()) {
      throw s.error(key, "invalid year '" + year_text + "'");
    }
    out.push_back({year, resolve(base, trim(item.substr(colon + 1)))});
  }
  return out;
}

CoefficientRange parse_range(Section& s, const std::string& key, const std::string& text, int default_step) {
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) throw s.error(key, "expected lo:hi or lo:hi:step");
  CoefficientRange r{0, 0, default_step};
  try {
    r.lo = std::stoi(parts[0]);
    r.hi = std::stoi(parts[1]);
    if (parts.size() == 3) r.step = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw s.error(key, "invalid range '" + text + "'");
  }
  return r;
}

PhaseConfig parse_phase(Section& s, const std::string& name, const PhaseConfig& defaults) {
  PhaseConfig p = defaults;
  p.name = name;
  if (auto step = s.number<int>("step")) {
    for (auto& r : p.ranges) r.step = *step;
  }
  for (std::size_t i = 0; i < 5; ++i) {
    const std::string key(CoefficientSet::kNames[i]);
    if (auto text = s.get(key)) p.ranges[i] = parse_range(s, key, *text, p.ranges[i].step);
  }
  if (auto v = s.number<int>("divisor")) p.resolution_divisor = *v;
  if (auto v = s.number<int>("mc")) p.mc_runs = *v;
  if (auto v = s.number<int>("top_k")) p.top_k = *v;
  if (auto v = s.number<int>("max_axis_values")) p.max_axis_values = *v;
  s.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return p;
}

}  // namespace

std::vector<ScenarioSpec> default_scenarios() {
  return {{"baseline", Policy::baseline, std::nullopt, 1, 2},
          {"compact", Policy::compact, std::nullopt, 1, 2},
          {"polycentric", Policy::polycentric, std::nullopt, 1, 2}};
}

CoefficientSet parse_coefficients(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 5) {
    throw std::invalid_argument("expected five comma-separated coefficients, got '" + text + "'");
  }
  std::array<double, 5> v{};
  for (std::size_t i = 0; i < 5; ++i) {
    const auto [ptr, ec] = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v[i]);
    if (ec != std::errc() || ptr != parts[i].data() + parts[i].size() || v[i] < 0 || v[i] > 100) {
      throw std::invalid_argument("coefficient '" + parts[i] + "' is not a number in [0,100]");
    }
  }
  return CoefficientSet::from_array(v);
}

ProjectConfig parse_config(const std::string& text, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config line " + std::to_string(e.line()) + ": " + e.message());
  }

  ProjectConfig cfg;
  std::vector<std::string> phase_order;
  std::vector<std::pair<std::string, const pt::ptree*>> phase_sections;
  bool saw_scenarios = false;
  bool saw_dataset = false;

  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ParseError("config: key '" + name + "' outside any section");
    }
    Section s(name, body);
    if (name == "dataset") {
      saw_dataset = true;
      cfg.urban = parse_dated(s, "urban", base_dir);
      cfg.roads = parse_dated(s, "roads", base_dir);
      cfg.slope = resolve(base_dir, s.require("slope"));
      cfg.excluded = resolve(base_dir, s.require("excluded"));
      if (auto h = s.get("hillshade")) cfg.hillshade = resolve(base_dir, *h);
      s.finish();
    } else if (name == "engine") {
      if (auto v = s.number<double>("critical_high")) cfg.engine.critical_high = *v;
      if (auto v = s.number<double>("critical_low")) cfg.engine.critical_low = *v;
      if (auto v = s.number<double>("boom")) cfg.engine.boom = *v;
      if (auto v = s.number<double>("bust")) cfg.engine.bust = *v;
      if (auto v = s.number<double>("critical_slope")) cfg.engine.critical_slope = *v;
      if (auto v = s.boolean("self_modification")) cfg.engine.enabled = *v;
      if (auto v = s.number<std::uint64_t>("seed")) cfg.seed = *v;
      s.finish();
      try {
        cfg.engine.validate();
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("config [engine]: ") + e.what());
      }
    } else if (name == "calibration") {
      if (auto v = s.get("phases")) phase_order = split(*v, ',');
      if (auto v = s.number<int>("forecast_mc")) cfg.forecast_derivation_mc = *v;
      s.finish();
      if (cfg.forecast_derivation_mc < 1) throw s.error("forecast_mc", "must be >= 1");
    } else if (name.rfind("phase:", 0) == 0) {
      phase_sections.emplace_back(name.substr(6), &body);
    } else if (name.rfind("scenario:", 0) == 0) {
      saw_scenarios = true;
      ScenarioSpec spec;
      spec.name = name.substr(9);
      try {
        spec.policy = parse_policy(s.get("policy").value_or(spec.name));
      } catch (const std::invalid_argument& e) {
        throw s.error("policy", e.what());
      }
      if (auto v = s.get("small_patch_threshold"); v && *v != "auto") {
        spec.small_patch_threshold = s.number<std::size_t>("small_patch_threshold");
      }
      if (auto v = s.number<int>("buffer_radius")) spec.buffer_radius = *v;
      if (auto v = s.number<int>("ring_width")) spec.boundary_ring_width = *v;
      s.finish();
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("config: ") + e.what());
      }
      cfg.scenarios.push_back(std::move(spec));
    } else if (name == "forecast") {
      if (auto v = s.number<int>("years")) cfg.forecast.years = *v;
      if (auto v = s.number<int>("mc")) cfg.forecast.mc_runs = *v;
      if (auto v = s.get("coefficients")) {
        try {
          cfg.forecast.coefficients = parse_coefficients(*v);
        } catch (const std::invalid_argument& e) {
          throw s.error("coefficients", e.what());
        }
      }
      s.finish();
      if (cfg.forecast.years < 1) throw s.error("years", "must be >= 1");
      if (cfg.forecast.mc_runs < 1) throw s.error("mc", "must be >= 1");
    } else if (name == "output") {
      if (auto v = s.get("directory")) cfg.output.directory = resolve(base_dir, *v);
      if (auto v = s.get("formats")) {
        cfg.output.pgm = cfg.output.ascii = false;
        for (const auto& f : split(*v, ',')) {
          if (f == "pgm") {
            cfg.output.pgm = true;
          } else if (f == "asc" || f == "ascii") {
            cfg.output.ascii = true;
          } else {
            throw s.error("formats", "unknown format '" + f + "'");
          }
        }
      }
      s.finish();
    } else {
      throw ParseError("config: unknown section [" + name + "]");
    }
  }
  if (!saw_dataset) throw ParseError("config: missing [dataset] section");
  if (cfg.output.directory == "out") cfg.output.directory = base_dir / "out";
  if (!saw_scenarios) cfg.scenarios = default_scenarios();
  cfg.source = base_dir;

  if (phase_order.empty()) {
    for (const auto& [n, body] : phase_sections) phase_order.push_back(n);
  }
  if (phase_order.empty()) {
    cfg.schedule = default_schedule();
  } else {
    const auto defaults = default_schedule();
    for (std::size_t k = 0; k < phase_order.size(); ++k) {
      const auto it = std::find_if(phase_sections.begin(), phase_sections.end(),
                                   [&](const auto& p) { return p.first == phase_order[k]; });
      const PhaseConfig& base = defaults[std::min(k, defaults.size() - 1)];
      if (it == phase_sections.end()) {
        throw ParseError("config [calibration] phases: no [phase:" + phase_order[k] + "] section");
      }
      Section s("phase:" + it->first, *it->second);
      cfg.schedule.push_back(parse_phase(s, it->first, base));
    }
  }
  return cfg;
}

ProjectConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  ProjectConfig cfg = parse_config(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
  cfg.source = path;
  return cfg;
}

LayerStack load_layers(const ProjectConfig& config) {
  auto check = [](const fs::path& p) {
    if (!fs::exists(p)) throw IoError("referenced file does not exist: " + p.string());
  };
  LayerStack stack;
  for (const auto& u : config.urban) {
    check(u.file);
    stack.urban_series.push_back({u.year, read_binary_layer(u.file)});
  }
  for (const auto& r : config.roads) {
    check(r.file);
    stack.road_series.push_back({r.year, read_binary_layer(r.file)});
  }
  check(config.slope);
  stack.slope = read_slope_layer(config.slope);
  check(config.excluded);
  stack.excluded = read_binary_layer(config.excluded);
  if (config.hillshade) {
    check(*config.hillshade);
    stack.hillshade = read_gray_layer(*config.hillshade);
  }
  return stack;
}

}  // namespace sleuth
