#include "leias/pilot_models.hpp"

namespace leias {

namespace {

PilotResponse grade(AlertAction preferred, AlertAction taken) {
  return preferred == taken ? PilotResponse::Agree : PilotResponse::Disagree;
}

// Rule-driven levels have a fixed right answer.
std::optional<PilotResponse> grade_rule_driven(const AlertDecision& d) {
  if (d.level == DecisionLevel::Mandatory) return grade(AlertAction::Warn, d.action);
  if (d.level == DecisionLevel::Suppressed) return grade(AlertAction::DoNotWarn, d.action);
  return std::nullopt;
}

}  // namespace

PreferenceTable PreferenceTable::reference_pilot() noexcept {
  PreferenceTable t;
  t.set(SensorKind::GPS, AlertLevel::Low, AlertAction::Warn);
  t.set(SensorKind::GPS, AlertLevel::High, AlertAction::DoNotWarn);
  t.set(SensorKind::LIDAR, AlertLevel::Low, AlertAction::Warn);
  t.set(SensorKind::LIDAR, AlertLevel::High, AlertAction::Warn);
  t.set(SensorKind::IMU, AlertLevel::Low, AlertAction::DoNotWarn);
  t.set(SensorKind::IMU, AlertLevel::High, AlertAction::DoNotWarn);
  return t;
}

PilotResponse table_pilot(const PreferenceTable& prefs, const AlertDecision& decision) {
  if (auto fixed = grade_rule_driven(decision)) return *fixed;
  return grade(prefs(decision.sensor, *learnable_level(decision.level)), decision.action);
}

PilotResponse threshold_pilot(double theta, const AlertDecision& decision, double error_value) {
  if (auto fixed = grade_rule_driven(decision)) return *fixed;
  return grade(error_value >= theta ? AlertAction::Warn : AlertAction::DoNotWarn,
               decision.action);
}

PilotResponse silent_pilot(const AlertDecision&) { return PilotResponse::Neutral; }

PilotResponse console_pilot(std::optional<PilotResponse> queued) {
  return queued.value_or(PilotResponse::Neutral);
}

PilotResponse respond(const PilotModelSpec& spec, const AlertDecision& decision,
                      double error_value) {
  if (const auto* t = std::get_if<pilot::Table>(&spec.kind))
    return table_pilot(t->preferences, decision);
  if (const auto* t = std::get_if<pilot::Threshold>(&spec.kind))
    return threshold_pilot(t->theta, decision, error_value);
  return PilotResponse::Neutral;
}

}  // namespace leias
