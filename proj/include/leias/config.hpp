#pragma once

// Scenario configuration: the JSON document every run is driven from.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "leias/core.hpp"
#include "leias/flight_sim.hpp"
#include "leias/pilot_models.hpp"
#include "leias/rl_agent.hpp"

namespace leias {

struct ScenarioConfig {
  std::vector<Position> waypoints{{10.0, 0.0}};
  double tick_hz = 1.0;
  RangeThresholds thresholds{};
  ErrorSchedule error_schedule{};
  PilotModelSpec pilot_model{};
  SelectionPolicy selection_policy = Annealing{};
  double response_window_s = 5.0;
  std::uint64_t seed = 0;

  double learning_rate = kDefaultLearningRate;
  FlightProfile aircraft{};
  SensorKind initial_active = SensorKind::GPS;
  bool learning = true;
  bool autonomous_switching = true;
  // Timeout switches only while the active sensor's error is below t3.
  bool switch_requires_error_below_t3 = false;
  Tick max_ticks = 120;
  // Error growth per tick used by testing-trial ramps.
  double test_ramp_rate = 1.0;

  double dt_seconds() const noexcept { return 1.0 / tick_hz; }
  // Response window in ticks; integral for a validated config.
  Tick window_ticks() const noexcept;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Returns the config unchanged iff all invariants hold. Throws
// ThresholdOrderError, EmptyRouteError, NonIntegralDeadlineError, or
// ConfigError for any other out-of-range field.
const ScenarioConfig& validate_config(const ScenarioConfig& raw);

// Missing keys take their defaults. Unknown kinds and malformed values
// throw ConfigError. The result is validated.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

// Fully resolved form: every key present, suitable for trace headers.
nlohmann::json config_to_json(const ScenarioConfig& c);

SelectionPolicy parse_policy_flag(const std::string& flag);

nlohmann::json to_json(const SelectionPolicy& p);
nlohmann::json to_json(const SensorSchedule& s);
nlohmann::json to_json(const PilotModelSpec& p);

}  // namespace leias
