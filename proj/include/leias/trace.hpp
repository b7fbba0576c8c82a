#pragma once

// Append-only JSON Lines trace: line 0 is a header carrying the resolved
// config and seed, every other line one TraceEvent.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "leias/core.hpp"
#include "leias/reliability.hpp"
#include "leias/rl_agent.hpp"

namespace leias {

inline constexpr std::string_view kArtifactVersion = "leias 1.0.0";

enum class EventKind : std::uint8_t {
  StateSnapshot,
  AlertOpened,
  PilotResponded,
  AlertResolved,
  SensorSwitched,
  RewardApplied,
  PolicyUpdated,
};

std::string_view to_string(EventKind k) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view s) noexcept;

struct TraceEvent {
  Tick tick = 0;
  EventKind kind = EventKind::StateSnapshot;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

enum class RunMode : std::uint8_t { Simulate, Train, Test, Interactive };
std::string_view to_string(RunMode m) noexcept;
std::optional<RunMode> parse_run_mode(std::string_view s) noexcept;

struct TraceHeader {
  std::string version{kArtifactVersion};
  nlohmann::json config;  // resolved ScenarioConfig
  std::uint64_t seed = 0;
  RunMode mode = RunMode::Simulate;
  std::int64_t trials = 0;  // training runs only
  std::optional<QTable> initial_q;  // runs that start from a trained table
};

nlohmann::json to_json(const TraceEvent& e);
TraceEvent event_from_json(const nlohmann::json& j);  // throws MalformedTraceError
nlohmann::json to_json(const TraceHeader& h);
TraceHeader header_from_json(const nlohmann::json& j);  // throws MalformedTraceError

// One serialized line, without the newline.
std::string to_line(const TraceEvent& e);
std::string to_line(const TraceHeader& h);

// Streams lines as they are produced; flushes each event.
class TraceWriter {
 public:
  TraceWriter(std::ostream& out, const TraceHeader& header);
  void write(const TraceEvent& e);
  void write(const std::vector<TraceEvent>& events);

 private:
  std::ostream* out_;
};

struct TraceFile {
  std::optional<TraceHeader> header;
  Trace events;
  std::vector<std::string> lines;  // raw lines, header included
};

// Reads a JSONL trace. A first line without "kind" is taken as the header.
// Truncated or invalid lines throw MalformedTraceError naming the line.
TraceFile read_trace(std::istream& in);
TraceFile read_trace(const std::filesystem::path& path);

// --- payload builders -----------------------------------------------------

nlohmann::json to_json(const AircraftState& a);
nlohmann::json to_json(const SensorReadings& r);
nlohmann::json to_json(const AssessmentSet& a);
nlohmann::json q_json(const QTable& q);
nlohmann::json colors_json(const PolicySummary& p);
QTable q_from_json(const nlohmann::json& j);  // throws Error on missing / extra keys

TraceEvent alert_opened_event(Tick tick, SensorKind sensor, DecisionLevel level,
                              Tick deadline_tick);
TraceEvent pilot_responded_event(Tick tick, PilotResponse response);
TraceEvent alert_resolved_event(Tick tick, SensorKind sensor, PilotResponse response,
                                std::string_view cause);
TraceEvent sensor_switched_event(Tick tick, SensorKind from, SensorKind to,
                                 std::string_view cause);
TraceEvent reward_applied_event(Tick tick, const QKey& key, int reward, double q_after);
TraceEvent policy_updated_event(Tick tick, const QTable& q);

}  // namespace leias
