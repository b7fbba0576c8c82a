#pragma once

// Seed sweeps: many independent training runs, engine runs or randomized
// rule checks. The default entry points spread the work over OpenMP
// threads; reference:: holds the plain serial loops they are tested against.
// Both produce identical results in identical order.

#include <cstdint>
#include <span>
#include <vector>

#include "leias/config.hpp"
#include "leias/monitor.hpp"

namespace leias::sweep {

struct TrainingOutcome {
  std::uint64_t seed = 0;
  QTable q;
  double cumulative_reward = 0.0;

  friend bool operator==(const TrainingOutcome&, const TrainingOutcome&) = default;
};

struct VerificationOutcome {
  std::uint64_t seed = 0;
  std::size_t events = 0;
  std::size_t alerts_opened = 0;
  std::vector<Violation> violations;

  friend bool operator==(const VerificationOutcome&, const VerificationOutcome&) = default;
};

// Counts of decide() outcomes over randomized implicated assessments and
// randomized Q tables, split by band.
struct HardRuleTally {
  std::int64_t safety_cases = 0;
  std::int64_t safety_warn = 0;
  std::int64_t normal_cases = 0;
  std::int64_t normal_no_warn = 0;

  friend bool operator==(const HardRuleTally&, const HardRuleTally&) = default;
};

// `base` with its seed replaced by each entry of `seeds`.
std::vector<TrainingOutcome> training(const ScenarioConfig& base, std::int64_t trials,
                                      std::span<const std::uint64_t> seeds);
std::vector<VerificationOutcome> verification(const ScenarioConfig& base,
                                              std::span<const std::uint64_t> seeds);
HardRuleTally hard_rules(const RangeThresholds& thresholds, std::int64_t cases_per_band,
                         std::uint64_t seed);

namespace reference {

std::vector<TrainingOutcome> training(const ScenarioConfig& base, std::int64_t trials,
                                      std::span<const std::uint64_t> seeds);
std::vector<VerificationOutcome> verification(const ScenarioConfig& base,
                                              std::span<const std::uint64_t> seeds);
HardRuleTally hard_rules(const RangeThresholds& thresholds, std::int64_t cases_per_band,
                         std::uint64_t seed);

}  // namespace reference

}  // namespace leias::sweep
