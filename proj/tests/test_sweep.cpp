#include "doctest.h"
#include "leias/sweep.hpp"

#include <omp.h>

#include <numeric>

using namespace leias;

namespace {

std::vector<std::uint64_t> seeds(std::size_t n) {
  std::vector<std::uint64_t> out(n);
  std::iota(out.begin(), out.end(), 100);
  return out;
}

}  // namespace

TEST_CASE("parallel training sweep equals the serial loop") {
  omp_set_num_threads(4);
  const auto s = seeds(12);
  const auto par = sweep::training(ScenarioConfig{}, 120, s);
  const auto ser = sweep::reference::training(ScenarioConfig{}, 120, s);
  CHECK(par == ser);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(par[i].seed == s[i]);
}

TEST_CASE("parallel verification sweep equals the serial loop") {
  omp_set_num_threads(4);
  ScenarioConfig c;
  c.waypoints = {{25, 0}};
  c.error_schedule[SensorKind::GPS] = schedule::RandomUniform{20};
  const auto s = seeds(10);
  const auto par = sweep::verification(c, s);
  CHECK(par == sweep::reference::verification(c, s));
  for (const auto& o : par) {
    CHECK(o.violations.empty());
    CHECK(o.events > 25);
  }
}

TEST_CASE("hard-rule tally is independent of scheduling") {
  const RangeThresholds t{3, 9, 15};
  omp_set_num_threads(3);
  const auto a = sweep::hard_rules(t, 3500, 1);
  omp_set_num_threads(1);
  const auto b = sweep::hard_rules(t, 3500, 1);
  CHECK(a == b);
  CHECK(a == sweep::reference::hard_rules(t, 3500, 1));
  CHECK(a.safety_cases == 3500);
  CHECK(a.safety_warn == 3500);
  CHECK(a.normal_cases == 3500);
  CHECK(a.normal_no_warn == 3500);
  CHECK(sweep::hard_rules(t, 0, 1) == sweep::HardRuleTally{});
}
