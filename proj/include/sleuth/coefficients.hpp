#pragma once

#include <array>
#include <string>
#include <string_view>

namespace sleuth {

// The five growth coefficients. Values are real internally so that
// self-modification can compound; they are presented as integers.
struct CoefficientSet {
  double dispersion = 0.0;
  double breed = 0.0;
  double spread = 0.0;
  double slope_resistance = 0.0;
  double road_gravity = 0.0;

  static constexpr double kMin = 0.0;
  static constexpr double kMax = 100.0;
  static constexpr std::array<std::string_view, 5> kNames{"dispersion", "breed", "spread",
                                                           "slope_resistance", "road_gravity"};

  std::array<double, 5> as_array() const { return {dispersion, breed, spread, slope_resistance, road_gravity}; }
  static CoefficientSet from_array(const std::array<double, 5>& v) { return {v[0], v[1], v[2], v[3], v[4]}; }

  CoefficientSet clamped() const;
  CoefficientSet rounded() const;
  bool in_range() const;

  friend bool operator==(const CoefficientSet&, const CoefficientSet&) = default;
};

// Lexicographic over (dispersion, breed, spread, slope_resistance, road_gravity).
bool lexicographic_less(const CoefficientSet& a, const CoefficientSet& b);

// "d,b,s,sr,rg" with integer-rounded values.
std::string to_string(const CoefficientSet& c);

struct SelfModConfig {
  double critical_high = 5.0;  // growth-rate percent
  double critical_low = 0.1;
  double boom = 1.1;
  double bust = 0.9;
  double critical_slope = 50.0;  // percent slope at and above which nothing urbanizes
  bool enabled = true;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Multiplier applied to dispersion/breed/spread in a boom that has lasted
// `years_since_onset` years before this one: relaxes by 0.01 per year to 1.
double effective_boom(const SelfModConfig& config, int years_since_onset);
// Bust counterpart: rises by 0.01 per year to 1.
double effective_bust(const SelfModConfig& config, int years_since_onset);

// One self-modification step. Above critical_high the city booms: dispersion,
// breed and spread scale by effective_boom, road_gravity by boom, and
// slope_resistance is divided by boom. Below critical_low it busts:
// dispersion, breed and spread scale by effective_bust and slope_resistance
// by boom. Between the thresholds, or when disabled, nothing changes. The
// result is clamped to [0,100].
CoefficientSet apply_self_modification(const CoefficientSet& coeffs, double grw_rate, const SelfModConfig& config,
                                       int years_since_onset);

// Consecutive boom / bust years, reset when the growth rate leaves the regime.
struct SelfModState {
  int boom_years = 0;
  int bust_years = 0;

  friend bool operator==(const SelfModState&, const SelfModState&) = default;
};

CoefficientSet self_modify(const CoefficientSet& coeffs, double grw_rate, const SelfModConfig& config,
                           SelfModState& state);

}  // namespace sleuth
