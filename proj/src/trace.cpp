#include "leias/trace.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "leias/errors.hpp"

namespace leias {

using nlohmann::json;

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::StateSnapshot: return "StateSnapshot";
    case EventKind::AlertOpened: return "AlertOpened";
    case EventKind::PilotResponded: return "PilotResponded";
    case EventKind::AlertResolved: return "AlertResolved";
    case EventKind::SensorSwitched: return "SensorSwitched";
    case EventKind::RewardApplied: return "RewardApplied";
    case EventKind::PolicyUpdated: return "PolicyUpdated";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s) noexcept {
  for (auto k : {EventKind::StateSnapshot, EventKind::AlertOpened, EventKind::PilotResponded,
                 EventKind::AlertResolved, EventKind::SensorSwitched, EventKind::RewardApplied,
                 EventKind::PolicyUpdated})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

std::string_view to_string(RunMode m) noexcept {
  switch (m) {
    case RunMode::Simulate: return "simulate";
    case RunMode::Train: return "train";
    case RunMode::Test: return "test";
    case RunMode::Interactive: return "run";
  }
  return "?";
}

std::optional<RunMode> parse_run_mode(std::string_view s) noexcept {
  for (auto m : {RunMode::Simulate, RunMode::Train, RunMode::Test, RunMode::Interactive})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

json to_json(const TraceEvent& e) {
  return {{"tick", e.tick}, {"kind", to_string(e.kind)}, {"payload", e.payload}};
}

TraceEvent event_from_json(const json& j) {
  if (!j.is_object() || !j.contains("tick") || !j.contains("kind") || !j.contains("payload"))
    throw MalformedTraceError("event needs \"tick\", \"kind\" and \"payload\"");
  if (!j["tick"].is_number_integer()) throw MalformedTraceError("event tick must be an integer");
  if (!j["kind"].is_string()) throw MalformedTraceError("event kind must be a string");
  const auto kind = parse_event_kind(j["kind"].get<std::string>());
  if (!kind) throw MalformedTraceError("unknown event kind " + j["kind"].dump());
  if (!j["payload"].is_object()) throw MalformedTraceError("event payload must be an object");
  return {j["tick"].get<Tick>(), *kind, j["payload"]};
}

json to_json(const TraceHeader& h) {
  json j = {{"version", h.version},
            {"config", h.config},
            {"seed", h.seed},
            {"mode", to_string(h.mode)}};
  if (h.mode == RunMode::Train) j["trials"] = h.trials;
  if (h.initial_q) j["initial_q"] = q_json(*h.initial_q);
  return j;
}

TraceHeader header_from_json(const json& j) {
  if (!j.is_object() || !j.contains("version") || !j.contains("config") || !j.contains("seed"))
    throw MalformedTraceError("header needs \"version\", \"config\" and \"seed\"");
  TraceHeader h;
  try {
    h.version = j.at("version").get<std::string>();
    h.config = j.at("config");
    h.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mode")) {
      const auto mode = parse_run_mode(j["mode"].get<std::string>());
      if (!mode) throw MalformedTraceError("unknown header mode " + j["mode"].dump());
      h.mode = *mode;
    }
    if (j.contains("trials")) h.trials = j["trials"].get<std::int64_t>();
    if (j.contains("initial_q")) h.initial_q = q_from_json(j["initial_q"]);
  } catch (const MalformedTraceError&) {
    throw;
  } catch (const std::exception& e) {
    throw MalformedTraceError(std::string("bad header: ") + e.what());
  }
  return h;
}

std::string to_line(const TraceEvent& e) { return to_json(e).dump(); }
std::string to_line(const TraceHeader& h) { return to_json(h).dump(); }

TraceWriter::TraceWriter(std::ostream& out, const TraceHeader& header) : out_(&out) {
  *out_ << to_line(header) << '\n';
  out_->flush();
}

void TraceWriter::write(const TraceEvent& e) {
  *out_ << to_line(e) << '\n';
  out_->flush();
}

void TraceWriter::write(const std::vector<TraceEvent>& events) {
  for (const auto& e : events) *out_ << to_line(e) << '\n';
  out_->flush();
}

TraceFile read_trace(std::istream& in) {
  TraceFile out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedTraceError("line " + std::to_string(number) + ": " + e.what());
    }
    out.lines.push_back(line);
    if (out.lines.size() == 1 && j.is_object() && !j.contains("kind")) {
      out.header = header_from_json(j);
      continue;
    }
    try {
      out.events.push_back(event_from_json(j));
    } catch (const MalformedTraceError& e) {
      throw MalformedTraceError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

TraceFile read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedTraceError("cannot open trace " + path.string());
  return read_trace(in);
}

json to_json(const AircraftState& a) {
  return {{"x", a.true_position.x},       {"y", a.true_position.y},
          {"altitude_ft", a.altitude_ft}, {"airspeed_kt", a.airspeed_kt},
          {"heading_deg", a.heading_deg}, {"waypoint_index", a.waypoint_index}};
}

json to_json(const SensorReadings& r) {
  json out = json::array();
  for (const auto& reading : r)
    out.push_back({{"sensor", to_string(reading.sensor)},
                   {"x", reading.reported_position.x},
                   {"y", reading.reported_position.y}});
  return out;
}

json to_json(const AssessmentSet& a) {
  json out = json::array();
  for (const auto& s : a.sensors)
    out.push_back({{"sensor", to_string(s.sensor)},
                   {"error", s.error_value},
                   {"range", to_string(s.range)},
                   {"implicated", s.implicated},
                   {"reliable", s.reliable}});
  return out;
}

json q_json(const QTable& q) {
  json out = json::object();
  for (std::size_t i = 0; i < QTable::kSize; ++i) out[to_string(QTable::key_at(i))] = q.values()[i];
  return out;
}

json colors_json(const PolicySummary& p) {
  json out = json::object();
  for (auto s : kAllSensors)
    for (auto l : kAllLevels)
      out[std::string(to_string(s)) + "." + std::string(to_string(l))] =
          to_string(p.at(s, l).color);
  return out;
}

QTable q_from_json(const json& j) {
  if (!j.is_object()) throw Error("QTable must be a JSON object");
  QTable q;
  std::array<bool, QTable::kSize> seen{};
  for (const auto& [key, value] : j.items()) {
    const auto k = parse_qkey(key);
    if (!k) throw Error("QTable key \"" + key + "\" is outside the 12-entry domain");
    if (!value.is_number()) throw Error("QTable value for " + key + " must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw Error("QTable value for " + key + " must be finite");
    q[*k] = v;
    seen[QTable::slot(*k)] = true;
  }
  for (std::size_t i = 0; i < QTable::kSize; ++i)
    if (!seen[i]) throw Error("QTable is missing " + to_string(QTable::key_at(i)));
  return q;
}

TraceEvent alert_opened_event(Tick tick, SensorKind sensor, DecisionLevel level,
                              Tick deadline_tick) {
  return {tick,
          EventKind::AlertOpened,
          {{"sensor", to_string(sensor)},
           {"level", to_string(level)},
           {"deadline_tick", deadline_tick}}};
}

TraceEvent pilot_responded_event(Tick tick, PilotResponse response) {
  return {tick, EventKind::PilotResponded, {{"response", to_string(response)}}};
}

TraceEvent alert_resolved_event(Tick tick, SensorKind sensor, PilotResponse response,
                                std::string_view cause) {
  return {tick,
          EventKind::AlertResolved,
          {{"sensor", to_string(sensor)}, {"response", to_string(response)}, {"cause", cause}}};
}

TraceEvent sensor_switched_event(Tick tick, SensorKind from, SensorKind to,
                                 std::string_view cause) {
  return {tick,
          EventKind::SensorSwitched,
          {{"from", to_string(from)}, {"to", to_string(to)}, {"cause", cause}}};
}

TraceEvent reward_applied_event(Tick tick, const QKey& key, int reward, double q_after) {
  return {tick,
          EventKind::RewardApplied,
          {{"sensor", to_string(key.sensor)},
           {"level", to_string(key.level)},
           {"action", to_string(key.action)},
           {"reward", reward},
           {"q_after", q_after}}};
}

TraceEvent policy_updated_event(Tick tick, const QTable& q) {
  return {tick,
          EventKind::PolicyUpdated,
          {{"q", q_json(q)}, {"colors", colors_json(policy_summary(q))}}};
}

}  // namespace leias
