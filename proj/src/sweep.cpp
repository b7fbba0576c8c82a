#include "leias/sweep.hpp"

#include <omp.h>

#include <algorithm>

#include "leias/harness.hpp"
#include "leias/random.hpp"
#include "leias/rl_agent.hpp"

namespace leias::sweep {

namespace {

// Hard-rule cases are drawn in blocks so each block owns its stream and the
// result does not depend on how blocks are scheduled.
constexpr std::int64_t kBlock = 1000;

TrainingOutcome train_one(const ScenarioConfig& base, std::int64_t trials, std::uint64_t seed) {
  ScenarioConfig c = base;
  c.seed = seed;
  const auto r = run_training(c, trials);
  double cumulative = 0.0;
  for (const auto& rec : r.records) cumulative += rec.reward.value_or(0);
  return {seed, r.q, cumulative};
}

VerificationOutcome verify_one(const ScenarioConfig& base, std::uint64_t seed) {
  ScenarioConfig c = base;
  c.seed = seed;
  const auto r = run_simulation(c);
  VerificationOutcome out{seed, r.trace.size(), 0, check_trace(r.trace)};
  out.alerts_opened = static_cast<std::size_t>(
      std::count_if(r.trace.begin(), r.trace.end(),
                     [](const TraceEvent& e) { return e.kind == EventKind::AlertOpened; }));
  return out;
}

HardRuleTally hard_rule_block(const RangeThresholds& t, std::int64_t begin, std::int64_t end,
                              std::uint64_t seed, std::int64_t block) {
  RandomStream draw(seed + static_cast<std::uint64_t>(block), "hard-rules");
  RandomStream selection(seed + static_cast<std::uint64_t>(block), "selection");
  HardRuleTally tally;
  for (std::int64_t i = begin; i < end; ++i) {
    QTable q;
    for (std::size_t k = 0; k < QTable::kSize; ++k) q[QTable::key_at(k)] = draw.uniform(-5.0, 5.0);
    const SelectionPolicy policy = (draw.uniform01() < 0.5)
                                       ? SelectionPolicy{BoltzmannFixed{draw.uniform(0.01, 10.0)}}
                                       : SelectionPolicy{Annealing{}};
    const auto trial = static_cast<std::int64_t>(draw.below(1000));

    SensorAssessment a;
    a.sensor = kAllSensors[draw.below(3)];
    a.implicated = true;

    a.error_value = t.t3 + draw.uniform(0.0, 10.0 * t.t3);
    a.range = ErrorRange::Safety;
    a.reliable = false;
    ++tally.safety_cases;
    if (decide(a, q, policy, trial, selection).action == AlertAction::Warn) ++tally.safety_warn;

    a.error_value = draw.uniform(0.0, t.t1);
    a.range = ErrorRange::Normal;
    a.reliable = true;
    ++tally.normal_cases;
    if (decide(a, q, policy, trial, selection).action == AlertAction::DoNotWarn)
      ++tally.normal_no_warn;
  }
  return tally;
}

void accumulate(HardRuleTally& into, const HardRuleTally& b) {
  into.safety_cases += b.safety_cases;
  into.safety_warn += b.safety_warn;
  into.normal_cases += b.normal_cases;
  into.normal_no_warn += b.normal_no_warn;
}

}  // namespace

std::vector<TrainingOutcome> training(const ScenarioConfig& base, std::int64_t trials,
                                      std::span<const std::uint64_t> seeds) {
  std::vector<TrainingOutcome> out(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[i] = train_one(base, trials, seeds[i]);
  return out;
}

std::vector<VerificationOutcome> verification(const ScenarioConfig& base,
                                              std::span<const std::uint64_t> seeds) {
  std::vector<VerificationOutcome> out(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[i] = verify_one(base, seeds[i]);
  return out;
}

HardRuleTally hard_rules(const RangeThresholds& t, std::int64_t cases_per_band,
                         std::uint64_t seed) {
  const std::int64_t blocks = (cases_per_band + kBlock - 1) / kBlock;
  std::vector<HardRuleTally> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b)
    partial[b] = hard_rule_block(t, b * kBlock, std::min(cases_per_band, (b + 1) * kBlock), seed, b);
  HardRuleTally total;
  for (const auto& p : partial) accumulate(total, p);
  return total;
}

namespace reference {

std::vector<TrainingOutcome> training(const ScenarioConfig& base, std::int64_t trials,
                                      std::span<const std::uint64_t> seeds) {
  std::vector<TrainingOutcome> out;
  for (auto seed : seeds) out.push_back(train_one(base, trials, seed));
  return out;
}

std::vector<VerificationOutcome> verification(const ScenarioConfig& base,
                                              std::span<const std::uint64_t> seeds) {
  std::vector<VerificationOutcome> out;
  for (auto seed : seeds) out.push_back(verify_one(base, seed));
  return out;
}

HardRuleTally hard_rules(const RangeThresholds& t, std::int64_t cases_per_band,
                         std::uint64_t seed) {
  HardRuleTally total;
  for (std::int64_t b = 0; b * kBlock < cases_per_band; ++b)
    accumulate(total, hard_rule_block(t, b * kBlock, std::min(cases_per_band, (b + 1) * kBlock), seed, b));
  return total;
}

}  // namespace reference

}  // namespace leias::sweep
