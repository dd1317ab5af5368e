#include <doctest.h>

#include <random>

#include "sleuth/monte_carlo.hpp"
#include "support.hpp"

using namespace sleuth;

namespace {

SimState sample_state(std::uint64_t seed, GridDims d = {24, 30}) {
  std::mt19937_64 gen(seed);
  auto land = std::make_shared<Landscape>();
  land->slope = testing::random_slope(d, 60, gen);
  land->excluded = testing::random_layer(d, 0.05, gen);
  land->roads = {{0, testing::random_layer(d, 0.08, gen)}};
  BinaryLayer urban = difference(testing::random_layer(d, 0.1, gen), land->excluded);
  return make_state(land, urban, {25, 40, 60, 20, 50}, 2000);
}

}  // namespace

TEST_SUITE("monte carlo") {
  TEST_CASE("same seed, identical ensembles; other seed differs") {
    const SimState s = sample_state(1);
    const EnsembleResult a = monte_carlo(s, {}, 5, 6, 77);
    const EnsembleResult b = monte_carlo(s, {}, 5, 6, 77);
    CHECK(a == b);
    CHECK_FALSE(a == monte_carlo(s, {}, 5, 6, 78));
  }

  TEST_CASE("worker count does not change any bit") {
    const SimState s = sample_state(2);
    MonteCarloOptions one;
    one.yearly_hits = true;
    MonteCarloOptions eight = one;
    eight.jobs = 8;
    const EnsembleResult a = monte_carlo(s, {}, 6, 11, 5, one);
    const EnsembleResult b = monte_carlo(s, {}, 6, 11, 5, eight);
    CHECK(a == b);
  }

  TEST_CASE("two-run mean equals the mean of the two runs executed alone") {
    const SimState s = sample_state(3);
    const EnsembleResult e = monte_carlo(s, {}, 4, 2, 123);
    const RunResult r0 = run_simulation(s, {}, 4, derive_seed(123, 0));
    const RunResult r1 = run_simulation(s, {}, 4, derive_seed(123, 1));
    REQUIRE(e.mean_stats.size() == 4);
    for (std::size_t y = 0; y < 4; ++y) {
      const auto& m = e.mean_stats[y];
      const auto& a = r0.stats[y];
      const auto& b = r1.stats[y];
      CHECK(m.year == a.year);
      CHECK(m.area == (a.area + b.area) * 0.5);
      CHECK(m.sng == (a.sng + b.sng) * 0.5);
      CHECK(m.og == (a.og + b.og) * 0.5);
      CHECK(m.rt == (a.rt + b.rt) * 0.5);
      CHECK(m.grw_rate == (a.grw_rate + b.grw_rate) * 0.5);
      CHECK(m.edges == (a.edges + b.edges) * 0.5);
      CHECK(m.rad == (a.rad + b.rad) * 0.5);
      CHECK(m.coeffs.spread == (a.coeffs.spread + b.coeffs.spread) * 0.5);
    }
    for (std::size_t i = 0; i < e.hit_counts.size(); ++i) {
      CHECK(e.hit_counts[i] == static_cast<std::uint32_t>(r0.final_urban[i] + r1.final_urban[i]));
    }
    CHECK(e.final_coeffs[0] == r0.final_coeffs);
    CHECK(e.final_coeffs[1] == r1.final_coeffs);
  }

  TEST_CASE("single run hit counts are the final layer") {
    const SimState s = sample_state(4);
    const EnsembleResult e = monte_carlo(s, {}, 3, 1, 9);
    for (auto h : e.hit_counts) CHECK(h <= 1);
  }

  TEST_CASE("yearly hits are bounded and never decrease") {
    const SimState s = sample_state(5);
    MonteCarloOptions o;
    o.yearly_hits = true;
    const int n = 7;
    const EnsembleResult e = monte_carlo(s, {}, 8, n, 31, o);
    REQUIRE(e.yearly_hits.size() == 8);
    CHECK(e.yearly_hits.back() == e.hit_counts);
    for (std::size_t i = 0; i < s.urban.size(); ++i) {
      std::uint32_t prev = s.urban[i] ? n : 0;
      for (const auto& year : e.yearly_hits) {
        CHECK(year[i] >= prev);
        CHECK(year[i] <= static_cast<std::uint32_t>(n));
        prev = year[i];
      }
    }
  }

  TEST_CASE("year lookup") {
    const SimState s = sample_state(6);
    const EnsembleResult e = monte_carlo(s, {}, 3, 1, 1);
    CHECK(e.covers(2001));
    CHECK(e.covers(2003));
    CHECK_FALSE(e.covers(2000));
    CHECK_FALSE(e.covers(2004));
    CHECK(e.stats_for(2002).year == 2002);
    CHECK_THROWS_AS(e.stats_for(2004), std::invalid_argument);
  }

  TEST_CASE("stats detail restricted to selected years") {
    const SimState s = sample_state(7);
    MonteCarloOptions o;
    o.full_stats_years = {2002};
    const EnsembleResult e = monte_carlo(s, {}, 3, 2, 4, o);
    const EnsembleResult full = monte_carlo(s, {}, 3, 2, 4);
    CHECK(e.stats_for(2001).edges == 0.0);
    CHECK(e.stats_for(2002).edges == full.stats_for(2002).edges);
    CHECK(e.stats_for(2003).area == full.stats_for(2003).area);
  }

  TEST_CASE("argument checks") {
    const SimState s = sample_state(8);
    CHECK_THROWS_AS(monte_carlo(s, {}, 3, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(monte_carlo(s, {}, -1, 1, 1), std::invalid_argument);
    CHECK(monte_carlo(s, {}, 0, 2, 1).mean_stats.empty());
  }
}
