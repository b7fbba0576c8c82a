#pragma once

// Scripted pilots used for training, testing and fault injection, and the
// console adapter for a live pilot.

#include <array>
#include <optional>
#include <variant>

#include "leias/core.hpp"
#include "leias/rl_agent.hpp"

namespace leias {

// Preferred action per (sensor, learnable level).
class PreferenceTable {
 public:
  AlertAction operator()(SensorKind s, AlertLevel l) const noexcept {
    return cells_[index_of(s)][static_cast<std::size_t>(l)];
  }
  void set(SensorKind s, AlertLevel l, AlertAction a) noexcept {
    cells_[index_of(s)][static_cast<std::size_t>(l)] = a;
  }
  friend bool operator==(const PreferenceTable&, const PreferenceTable&) = default;

  // GPS: Warn / DoNotWarn, LIDAR: Warn / Warn, IMU: DoNotWarn / DoNotWarn.
  static PreferenceTable reference_pilot() noexcept;

 private:
  std::array<std::array<AlertAction, 2>, 3> cells_{};
};

namespace pilot {

struct Table {
  PreferenceTable preferences = PreferenceTable::reference_pilot();
  friend bool operator==(const Table&, const Table&) = default;
};

struct Threshold {
  double theta = 9.0;
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

struct Silent {
  friend bool operator==(const Silent&, const Silent&) = default;
};

struct Console {
  friend bool operator==(const Console&, const Console&) = default;
};

}  // namespace pilot

using PilotKind = std::variant<pilot::Table, pilot::Threshold, pilot::Silent, pilot::Console>;

struct PilotModelSpec {
  PilotKind kind = pilot::Table{};
  // Ticks between an alert opening and a scripted pilot answering it.
  Tick response_delay_ticks = 1;

  bool scripted() const noexcept {
    return std::holds_alternative<pilot::Table>(kind) ||
           std::holds_alternative<pilot::Threshold>(kind);
  }
  friend bool operator==(const PilotModelSpec&, const PilotModelSpec&) = default;
};

// Agree iff the decision matches the preferred action. Mandatory alerts are
// always confirmed; suppressed decisions are agreed with.
PilotResponse table_pilot(const PreferenceTable& prefs, const AlertDecision& decision);

// Preferred action is Warn iff error_value >= theta.
PilotResponse threshold_pilot(double theta, const AlertDecision& decision, double error_value);

PilotResponse silent_pilot(const AlertDecision& decision);

PilotResponse console_pilot(std::optional<PilotResponse> queued);

// Response of the configured model to a decision. The console model is not
// a function of the decision and always yields Neutral here.
PilotResponse respond(const PilotModelSpec& spec, const AlertDecision& decision,
                      double error_value);

}  // namespace leias
