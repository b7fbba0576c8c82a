#pragma once

// Alert lifecycle and sensor authority: the per-tick engine step.

#include <optional>
#include <vector>

#include "leias/config.hpp"
#include "leias/core.hpp"
#include "leias/random.hpp"
#include "leias/reliability.hpp"
#include "leias/rl_agent.hpp"
#include "leias/trace.hpp"

namespace leias {

struct AlertState {
  SensorKind sensor = SensorKind::GPS;
  DecisionLevel level = DecisionLevel::Mandatory;  // Low, High or Mandatory
  Tick opened_tick = 0;
  Tick deadline_tick = 0;  // opened_tick + window ticks
  PilotResponse response = PilotResponse::Neutral;
  bool resolved = false;
  AlertDecision decision;
  double error_value = 0.0;  // implicated error when the alert opened

  friend bool operator==(const AlertState&, const AlertState&) = default;
};

struct SensorAuthority {
  SensorKind active = SensorKind::GPS;
  std::optional<SensorKind> recommended;  // never equal to active

  friend bool operator==(const SensorAuthority&, const SensorAuthority&) = default;
};

// A pilot Disagree on the active sensor's unreliability. It stands until the
// active sensor changes or reads reliable again; while it stands the engine
// neither re-alerts at the same or a lower level nor switches silently.
struct Contest {
  SensorKind sensor = SensorKind::GPS;
  DecisionLevel level = DecisionLevel::Low;

  friend bool operator==(const Contest&, const Contest&) = default;
};

struct EngineState {
  Tick tick = 0;  // next tick to process
  AircraftState aircraft;
  SensorReadings readings{};
  AssessmentSet assessments;
  SensorAuthority authority;
  std::optional<AlertState> alert;  // at most one, always unresolved
  std::optional<Contest> contest;
  QTable q;
  std::int64_t trial_index = 0;  // learnable decisions taken so far
  double temperature = 0.0;      // temperature the next decision will use

  friend bool operator==(const EngineState&, const EngineState&) = default;
};

struct StepResult {
  EngineState state;
  std::vector<TraceEvent> events;
};

// Reliable sensors other than active with the smallest error value; ties go
// GPS < LIDAR < IMU.
std::optional<SensorKind> select_recommended(const AssessmentSet& assessments, SensorKind active);

EngineState initial_state(const ScenarioConfig& config, const QTable& q = {});

// One tick, in order: advance aircraft and assess sensors; recompute the
// recommendation; decide on the active sensor if implicated and no alert is
// open; apply a pilot response; expire a timed-out alert; snapshot.
// A DoNotWarn decision at Level1/Level2 hands the active sensor to the
// recommended one without alerting (cause "policy").
// Throws ResponseWithoutAlertError for Agree/Disagree with no open alert.
StepResult engine_step(const EngineState& state, std::optional<PilotResponse> pilot_input,
                       const ScenarioConfig& config, RngStreams& rng);

// Response a scripted pilot gives this tick, if any.
std::optional<PilotResponse> scripted_input(const EngineState& state,
                                            const PilotModelSpec& pilot);

nlohmann::json to_json(const AlertState& a);
TraceEvent snapshot_event(const EngineState& state, Tick tick);

}  // namespace leias
