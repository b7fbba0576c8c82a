#pragma once

// Training and testing trial loops, scripted engine runs, deterministic
// replay and the file formats the CLI writes.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leias/autonomy.hpp"
#include "leias/config.hpp"
#include "leias/monitor.hpp"
#include "leias/trace.hpp"

namespace leias {

struct TrialRecord {
  std::int64_t trial_index = 0;
  SensorKind sensor = SensorKind::GPS;
  DecisionLevel level = DecisionLevel::Suppressed;
  double error_value = 0.0;
  AlertAction action = AlertAction::DoNotWarn;
  PilotResponse response = PilotResponse::Neutral;
  std::optional<int> reward;
  std::optional<double> q_after;  // value of the decided entry; absent for rule-driven levels
  double temperature = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

nlohmann::json to_json(const TrialRecord& r);

struct CurveRow {
  std::int64_t trial = 0;  // trials completed
  double cumulative_reward = 0.0;
  QTable q;
};

inline constexpr std::int64_t kCurveStride = 10;

struct TrainingResult {
  QTable q;
  std::vector<TrialRecord> records;
  std::vector<CurveRow> curve;
  Trace trace;
};

// Each trial draws a sensor uniformly and an error uniformly on [t1, t3),
// decides, is graded by the scripted pilot, and updates one Q entry. The
// curve is sampled every kCurveStride trials. Throws ConfigError unless the
// pilot model is table or threshold.
TrainingResult run_training(const ScenarioConfig& config, std::int64_t trials,
                            const QTable& initial = {});

struct SensorTestResult {
  SensorKind sensor = SensorKind::GPS;
  std::optional<Tick> first_alert_tick;
  double first_alert_error = 0.0;
  DecisionLevel first_alert_level = DecisionLevel::Suppressed;
  std::optional<Tick> first_level1_tick;
  std::optional<Tick> first_safety_tick;
  // Every tick at or past t3 produced a Mandatory Warn.
  bool mandatory_at_safety = false;
  std::vector<TrialRecord> records;  // one per tick, trial_index = tick
};

struct TestingResult {
  std::array<SensorTestResult, 3> sensors{};
  bool passed() const noexcept;
};

// Ramps each sensor's error from 0 past t3 with learning frozen and the
// selection temperature held at the policy's terminal value.
TestingResult run_testing(const ScenarioConfig& config, const QTable& q);

using InputScript = std::map<Tick, PilotResponse>;

struct SimulationResult {
  EngineState final_state;
  Trace trace;
};

struct SimulationOptions {
  InputScript script;            // console pilot responses by tick
  std::optional<Tick> ticks;     // exact tick count; overrides route completion
  QTable initial_q;
};

// Runs the engine until the route completes or max_ticks elapse. Scripted
// pilots answer from their model; the console pilot takes responses from
// the script.
SimulationResult run_simulation(const ScenarioConfig& config, const SimulationOptions& options = {});

// Serialized trace, header first, one string per line.
std::vector<std::string> render_trace(const TraceHeader& header, const Trace& events);
TraceHeader make_header(const ScenarioConfig& config, RunMode mode, std::int64_t trials = 0,
                        const QTable& initial_q = {});

// Regenerates a recorded trace from its header and compares it line by line.
// Throws DivergenceError at the first differing line.
void replay(const TraceFile& recorded);

// --- files ------------------------------------------------------------------

std::string curve_csv(const std::vector<CurveRow>& curve);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);
void write_qtable(const std::filesystem::path& path, const QTable& q);
QTable read_qtable(const std::filesystem::path& path);

}  // namespace leias
