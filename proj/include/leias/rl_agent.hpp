#pragma once

// The alerting decision cycle: propose Warn / DoNotWarn for an implicated
// sensor, pick one by learned value under a Boltzmann exploration policy,
// and learn from the pilot's +1 / -1 feedback.

#include <array>
#include <optional>
#include <utility>
#include <variant>

#include "leias/core.hpp"
#include "leias/random.hpp"

namespace leias {

struct BoltzmannFixed {
  double temperature = 1.0;
  friend bool operator==(const BoltzmannFixed&, const BoltzmannFixed&) = default;
};

// tau(trial) = max(floor, tau0 * decay^trial)
struct Annealing {
  double tau0 = 2.0;
  double decay = 0.98;
  double floor = 0.05;
  friend bool operator==(const Annealing&, const Annealing&) = default;
};

using SelectionPolicy = std::variant<BoltzmannFixed, Annealing>;

inline constexpr double kDefaultHighTemperature = 1.0;
inline constexpr double kDefaultLowTemperature = 0.1;
inline constexpr double kDefaultLearningRate = 0.1;
// Q-gap below which a severity-bar cell stays White.
inline constexpr double kPolicyMargin = 0.05;

// Throws ConfigError on out-of-range parameters.
void validate_policy(const SelectionPolicy& p);
double temperature_at(const SelectionPolicy& p, std::int64_t trial_index) noexcept;
// Temperature the schedule settles at (fixed tau, or the annealing floor).
double terminal_temperature(const SelectionPolicy& p) noexcept;

struct AlertDecision {
  SensorKind sensor = SensorKind::GPS;
  DecisionLevel level = DecisionLevel::Suppressed;
  AlertAction action = AlertAction::DoNotWarn;
  double temperature = 0.0;
  double probability = 1.0;  // probability of the chosen action

  friend bool operator==(const AlertDecision&, const AlertDecision&) = default;
};

// P(Warn) for the two-action softmax, evaluated after subtracting the max.
double warn_probability(double q_warn, double q_no_warn, double temperature) noexcept;

struct Selection {
  AlertAction action;
  double probability;
};

Selection select_boltzmann(double q_warn, double q_no_warn, double temperature,
                           RandomStream& rng);

// Safety -> Mandatory Warn; Normal -> Suppressed DoNotWarn; Level1/Level2 ->
// Boltzmann over the two learned values. Throws NotImplicatedError.
AlertDecision decide(const SensorAssessment& assessment, const QTable& q,
                     const SelectionPolicy& policy, std::int64_t trial_index, RandomStream& rng);

// +1 on Agree, -1 on Disagree, nothing on Neutral or rule-driven levels.
std::optional<int> reward_from_alignment(const AlertDecision& decision, PilotResponse response);

// value(key) <- value(key) + alpha * (reward - value(key))
QTable update_q(QTable q, const QKey& key, double reward, double alpha = kDefaultLearningRate);

enum class BandColor : std::uint8_t { Green, Red, White };
std::string_view to_string(BandColor c) noexcept;

struct PolicyCell {
  BandColor color = BandColor::White;
  double warn = 0.0;
  double no_warn = 0.0;
};

struct PolicySummary {
  // [sensor][level]
  std::array<std::array<PolicyCell, 2>, 3> cells{};

  const PolicyCell& at(SensorKind s, AlertLevel l) const noexcept {
    return cells[index_of(s)][static_cast<std::size_t>(l)];
  }
};

PolicySummary policy_summary(const QTable& q, double margin = kPolicyMargin);

// argmax over the two actions; nullopt on an exact tie.
std::optional<AlertAction> greedy_action(const QTable& q, SensorKind s, AlertLevel l) noexcept;

}  // namespace leias
