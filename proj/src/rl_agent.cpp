#include "leias/rl_agent.hpp"

#include <algorithm>
#include <cmath>

#include "leias/errors.hpp"

namespace leias {

void validate_policy(const SelectionPolicy& p) {
  if (const auto* f = std::get_if<BoltzmannFixed>(&p)) {
    if (!(std::isfinite(f->temperature) && f->temperature > 0.0))
      throw ConfigError("boltzmann temperature must be > 0");
    return;
  }
  const auto& a = std::get<Annealing>(p);
  if (!(std::isfinite(a.tau0) && a.tau0 > 0.0)) throw ConfigError("anneal tau0 must be > 0");
  if (!(std::isfinite(a.decay) && a.decay > 0.0 && a.decay < 1.0))
    throw ConfigError("anneal decay must lie in (0, 1)");
  if (!(std::isfinite(a.floor) && a.floor > 0.0)) throw ConfigError("anneal floor must be > 0");
  if (a.tau0 < a.floor) throw ConfigError("anneal tau0 must be >= floor");
}

double temperature_at(const SelectionPolicy& p, std::int64_t trial_index) noexcept {
  if (const auto* f = std::get_if<BoltzmannFixed>(&p)) return f->temperature;
  const auto& a = std::get<Annealing>(p);
  const double tau = a.tau0 * std::pow(a.decay, static_cast<double>(std::max<std::int64_t>(0, trial_index)));
  return std::max(a.floor, tau);
}

double terminal_temperature(const SelectionPolicy& p) noexcept {
  if (const auto* f = std::get_if<BoltzmannFixed>(&p)) return f->temperature;
  return std::get<Annealing>(p).floor;
}

double warn_probability(double q_warn, double q_no_warn, double temperature) noexcept {
  const double m = std::max(q_warn, q_no_warn);
  const double ew = std::exp((q_warn - m) / temperature);
  const double en = std::exp((q_no_warn - m) / temperature);
  return ew / (ew + en);
}

Selection select_boltzmann(double q_warn, double q_no_warn, double temperature,
                           RandomStream& rng) {
  const double p_warn = warn_probability(q_warn, q_no_warn, temperature);
  if (rng.uniform01() < p_warn) return {AlertAction::Warn, p_warn};
  return {AlertAction::DoNotWarn, warn_probability(q_no_warn, q_warn, temperature)};
}

AlertDecision decide(const SensorAssessment& assessment, const QTable& q,
                     const SelectionPolicy& policy, std::int64_t trial_index, RandomStream& rng) {
  if (!assessment.implicated)
    throw NotImplicatedError(std::string(to_string(assessment.sensor)) + " is not implicated");

  AlertDecision d;
  d.sensor = assessment.sensor;
  d.temperature = temperature_at(policy, trial_index);
  switch (assessment.range) {
    case ErrorRange::Safety:
      d.level = DecisionLevel::Mandatory;
      d.action = AlertAction::Warn;
      d.probability = 1.0;
      return d;
    case ErrorRange::Normal:
      d.level = DecisionLevel::Suppressed;
      d.action = AlertAction::DoNotWarn;
      d.probability = 1.0;
      return d;
    case ErrorRange::Level1:
    case ErrorRange::Level2:
      break;
  }
  const AlertLevel level = *learnable_level(assessment.range);
  d.level = to_decision_level(level);
  const auto pick = select_boltzmann(q.value(d.sensor, level, AlertAction::Warn),
                                     q.value(d.sensor, level, AlertAction::DoNotWarn),
                                     d.temperature, rng);
  d.action = pick.action;
  d.probability = pick.probability;
  return d;
}

std::optional<int> reward_from_alignment(const AlertDecision& decision, PilotResponse response) {
  if (!learnable_level(decision.level)) return std::nullopt;
  switch (response) {
    case PilotResponse::Agree: return +1;
    case PilotResponse::Disagree: return -1;
    case PilotResponse::Neutral: break;
  }
  return std::nullopt;
}

QTable update_q(QTable q, const QKey& key, double reward, double alpha) {
  double& v = q[key];
  v += alpha * (reward - v);
  return q;
}

std::string_view to_string(BandColor c) noexcept {
  switch (c) {
    case BandColor::Green: return "Green";
    case BandColor::Red: return "Red";
    case BandColor::White: return "White";
  }
  return "?";
}

PolicySummary policy_summary(const QTable& q, double margin) {
  PolicySummary out;
  for (auto s : kAllSensors) {
    for (auto l : kAllLevels) {
      PolicyCell& cell = out.cells[index_of(s)][static_cast<std::size_t>(l)];
      cell.warn = q.value(s, l, AlertAction::Warn);
      cell.no_warn = q.value(s, l, AlertAction::DoNotWarn);
      if (cell.warn - cell.no_warn > margin)
        cell.color = BandColor::Red;
      else if (cell.no_warn - cell.warn > margin)
        cell.color = BandColor::Green;
      else
        cell.color = BandColor::White;
    }
  }
  return out;
}

std::optional<AlertAction> greedy_action(const QTable& q, SensorKind s, AlertLevel l) noexcept {
  const double w = q.value(s, l, AlertAction::Warn);
  const double n = q.value(s, l, AlertAction::DoNotWarn);
  if (w > n) return AlertAction::Warn;
  if (n > w) return AlertAction::DoNotWarn;
  return std::nullopt;
}

}  // namespace leias
