#include "sleuth/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sleuth {

CoefficientSet CoefficientSet::clamped() const {
  auto v = as_array();
  for (double& x : v) x = std::clamp(x, kMin, kMax);
  return from_array(v);
}

CoefficientSet CoefficientSet::rounded() const {
  auto v = as_array();
  for (double& x : v) x = std::round(x);
  return from_array(v);
}

bool CoefficientSet::in_range() const {
  const auto v = as_array();
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= kMin && x <= kMax; });
}

bool lexicographic_less(const CoefficientSet& a, const CoefficientSet& b) { return a.as_array() < b.as_array(); }

std::string to_string(const CoefficientSet& c) {
  std::string s;
  for (double v : c.as_array()) {
    if (!s.empty()) s += ',';
    s += std::to_string(static_cast<long>(std::lround(v)));
  }
  return s;
}

void SelfModConfig::validate() const {
  if (!(critical_low > 0.0)) throw std::invalid_argument("critical_low must be > 0");
  if (!(critical_high > critical_low)) throw std::invalid_argument("critical_high must exceed critical_low");
  if (!(boom > 1.0)) throw std::invalid_argument("boom must be > 1");
  if (!(bust > 0.0 && bust < 1.0)) throw std::invalid_argument("bust must lie in (0,1)");
  if (!(critical_slope > 0.0 && critical_slope <= 100.0)) {
    throw std::invalid_argument("critical_slope must lie in (0,100]");
  }
}

double effective_boom(const SelfModConfig& config, int years_since_onset) {
  return std::max(1.0, config.boom - 0.01 * years_since_onset);
}

double effective_bust(const SelfModConfig& config, int years_since_onset) {
  return std::min(1.0, config.bust + 0.01 * years_since_onset);
}

CoefficientSet apply_self_modification(const CoefficientSet& coeffs, double grw_rate, const SelfModConfig& config,
                                       int years_since_onset) {
  if (!config.enabled) return coeffs;
  CoefficientSet c = coeffs;
  if (grw_rate > config.critical_high) {
    const double m = effective_boom(config, years_since_onset);
    c.dispersion *= m;
    c.breed *= m;
    c.spread *= m;
    c.road_gravity *= config.boom;
    c.slope_resistance /= config.boom;
  } else if (grw_rate < config.critical_low) {
    const double m = effective_bust(config, years_since_onset);
    c.dispersion *= m;
    c.breed *= m;
    c.spread *= m;
    c.slope_resistance *= config.boom;
  } else {
    return coeffs;
  }
  return c.clamped();
}

CoefficientSet self_modify(const CoefficientSet& coeffs, double grw_rate, const SelfModConfig& config,
                           SelfModState& state) {
  if (!config.enabled) return coeffs;
  if (grw_rate > config.critical_high) {
    state.bust_years = 0;
    return apply_self_modification(coeffs, grw_rate, config, state.boom_years++);
  }
  if (grw_rate < config.critical_low) {
    state.boom_years = 0;
    return apply_self_modification(coeffs, grw_rate, config, state.bust_years++);
  }
  state = {};
  return coeffs;
}

}  // namespace sleuth
