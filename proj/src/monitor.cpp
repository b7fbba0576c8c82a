#include "leias/monitor.hpp"

#include <algorithm>
#include <map>

#include "leias/errors.hpp"

namespace leias {

using nlohmann::json;

namespace {

struct SensorView {
  ErrorRange range = ErrorRange::Normal;
  bool implicated = false;
  bool reliable = true;
};

struct SnapshotView {
  SensorKind active = SensorKind::GPS;
  std::array<SensorView, 3> sensors{};

  bool any_reliable() const {
    return std::any_of(sensors.begin(), sensors.end(), [](const SensorView& s) { return s.reliable; });
  }
  const SensorView& operator[](SensorKind s) const { return sensors[index_of(s)]; }
};

struct OpenAlert {
  SensorKind sensor;
  DecisionLevel level;
  Tick opened_tick;
  Tick deadline_tick;
  bool responded = false;
};

template <class T>
T field(const json& payload, const char* key, Tick tick) {
  try {
    return payload.at(key).get<T>();
  } catch (const json::exception&) {
    throw MalformedTraceError("tick " + std::to_string(tick) + ": missing or bad \"" + key + "\"");
  }
}

SensorKind sensor_field(const json& payload, const char* key, Tick tick) {
  const auto s = parse_sensor(field<std::string>(payload, key, tick));
  if (!s) throw MalformedTraceError("tick " + std::to_string(tick) + ": bad sensor in " + key);
  return *s;
}

SnapshotView decode_snapshot(const TraceEvent& e) {
  SnapshotView v;
  const auto& p = e.payload;
  if (!p.contains("authority") || !p["authority"].is_object())
    throw MalformedTraceError("tick " + std::to_string(e.tick) + ": snapshot without authority");
  v.active = sensor_field(p["authority"], "active", e.tick);
  if (!p.contains("assessments") || !p["assessments"].is_array() || p["assessments"].size() != 3)
    throw MalformedTraceError("tick " + std::to_string(e.tick) + ": snapshot needs 3 assessments");
  std::array<bool, 3> seen{};
  for (const auto& a : p["assessments"]) {
    const SensorKind s = sensor_field(a, "sensor", e.tick);
    const auto range = parse_range(field<std::string>(a, "range", e.tick));
    if (!range) throw MalformedTraceError("tick " + std::to_string(e.tick) + ": bad range");
    v.sensors[index_of(s)] = {*range, field<bool>(a, "implicated", e.tick),
                              field<bool>(a, "reliable", e.tick)};
    seen[index_of(s)] = true;
  }
  if (!seen[0] || !seen[1] || !seen[2])
    throw MalformedTraceError("tick " + std::to_string(e.tick) + ": duplicate assessment");
  return v;
}

// Events grouped per tick, with the tick's snapshot located.
struct TickGroup {
  Tick tick;
  std::vector<const TraceEvent*> events;
  SnapshotView snapshot;
};

std::vector<TickGroup> group_by_tick(const Trace& trace) {
  std::vector<TickGroup> groups;
  std::vector<bool> has_snapshot;
  for (const auto& e : trace) {
    if (!groups.empty() && e.tick < groups.back().tick)
      throw MalformedTraceError("tick " + std::to_string(e.tick) + " follows tick " +
                                std::to_string(groups.back().tick));
    if (groups.empty() || e.tick != groups.back().tick) {
      if (!groups.empty() && e.tick != groups.back().tick + 1)
        throw MalformedTraceError("no StateSnapshot for tick " +
                                  std::to_string(groups.back().tick + 1));
      groups.push_back({e.tick, {}, {}});
      has_snapshot.push_back(false);
    }
    groups.back().events.push_back(&e);
    if (e.kind == EventKind::StateSnapshot) {
      if (has_snapshot.back())
        throw MalformedTraceError("tick " + std::to_string(e.tick) + " has two StateSnapshots");
      has_snapshot.back() = true;
      groups.back().snapshot = decode_snapshot(e);
    }
  }
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (!has_snapshot[i])
      throw MalformedTraceError("tick " + std::to_string(groups[i].tick) + " has no StateSnapshot");
  return groups;
}

json sensor_bindings(SensorKind s, const SensorView& v) {
  return {{"sensor", to_string(s)},
          {"range", to_string(v.range)},
          {"implicated", v.implicated},
          {"reliable", v.reliable}};
}

}  // namespace

std::string_view to_string(RequirementId r) noexcept {
  switch (r) {
    case RequirementId::G1NormalReliable: return "G1-normal-reliable";
    case RequirementId::G2SafetyUnreliable: return "G2-safety-unreliable";
    case RequirementId::G3ResponseExpected: return "G3-response-expected";
    case RequirementId::G4MandatoryAlert: return "G4-mandatory-alert";
    case RequirementId::G5NormalNoAlert: return "G5-normal-no-alert";
    case RequirementId::L2UnreliableActive: return "L2-unreliable-active-justified";
  }
  return "?";
}

std::optional<RequirementId> parse_requirement(std::string_view s) noexcept {
  for (auto r : kAllRequirements)
    if (s == to_string(r)) return r;
  return std::nullopt;
}

std::string_view describe(RequirementId r) noexcept {
  switch (r) {
    case RequirementId::G1NormalReliable:
      return "a sensor whose error is in the Normal range is reliable";
    case RequirementId::G2SafetyUnreliable:
      return "an implicated sensor whose error is in the Safety range is unreliable";
    case RequirementId::G3ResponseExpected:
      return "the pilot answers every alert with Agree or Disagree by its deadline";
    case RequirementId::G4MandatoryAlert:
      return "an implicated active sensor in the Safety range is alerted";
    case RequirementId::G5NormalNoAlert:
      return "no alert is opened for an active sensor in the Normal range";
    case RequirementId::L2UnreliableActive:
      return "an unreliable active sensor is contested, newly unreliable, or has no reliable "
             "alternative on the previous tick";
  }
  return "";
}

json to_json(const Violation& v) {
  return {{"req", to_string(v.req)}, {"tick", v.tick}, {"bindings", v.bindings}};
}

std::vector<Violation> check_trace(const Trace& trace) {
  std::vector<Violation> out;
  const auto groups = group_by_tick(trace);

  std::optional<OpenAlert> current;    // unresolved alert
  std::vector<OpenAlert> pending;      // alerts awaiting a response (G3)
  std::optional<std::pair<SensorKind, DecisionLevel>> contest;
  const SnapshotView* previous = nullptr;

  for (const auto& g : groups) {
    const Tick k = g.tick;
    const SnapshotView& snap = g.snapshot;
    std::vector<SensorKind> opened_now;
    std::optional<OpenAlert> open_during;  // alert open at any point in this tick
    if (current) open_during = current;

    for (const TraceEvent* e : g.events) {
      switch (e->kind) {
        case EventKind::AlertOpened: {
          const auto level = parse_decision_level(field<std::string>(e->payload, "level", k));
          if (!level) throw MalformedTraceError("tick " + std::to_string(k) + ": bad alert level");
          OpenAlert a{sensor_field(e->payload, "sensor", k), *level, k,
                      field<Tick>(e->payload, "deadline_tick", k)};
          if (a.deadline_tick < k)
            throw MalformedTraceError("tick " + std::to_string(k) + ": deadline in the past");
          current = a;
          open_during = a;
          pending.push_back(a);
          opened_now.push_back(a.sensor);
          break;
        }
        case EventKind::PilotResponded: {
          const auto r = parse_response(field<std::string>(e->payload, "response", k));
          if (!r) throw MalformedTraceError("tick " + std::to_string(k) + ": bad response");
          if (!current)
            throw MalformedTraceError("tick " + std::to_string(k) + ": response with no open alert");
          if (*r == PilotResponse::Neutral) break;
          current->responded = true;
          for (auto& p : pending)
            if (p.opened_tick == current->opened_tick) p.responded = true;
          if (*r == PilotResponse::Disagree)
            contest = std::pair{current->sensor, current->level};
          else
            contest.reset();
          break;
        }
        case EventKind::AlertResolved:
          current.reset();
          break;
        default:
          break;
      }
    }

    if (contest && (contest->first != snap.active || snap[snap.active].reliable)) contest.reset();

    // G1 / G2
    for (auto s : kAllSensors) {
      const SensorView& v = snap[s];
      if (v.range == ErrorRange::Normal && !v.reliable)
        out.push_back({RequirementId::G1NormalReliable, k, sensor_bindings(s, v)});
      if (v.implicated && v.range == ErrorRange::Safety && v.reliable)
        out.push_back({RequirementId::G2SafetyUnreliable, k, sensor_bindings(s, v)});
    }

    // G3: obligations whose window closes at this tick
    for (auto it = pending.begin(); it != pending.end();) {
      if (it->responded) {
        it = pending.erase(it);
      } else if (it->deadline_tick <= k) {
        out.push_back({RequirementId::G3ResponseExpected, it->deadline_tick,
                       {{"sensor", to_string(it->sensor)},
                        {"opened_tick", it->opened_tick},
                        {"deadline_tick", it->deadline_tick},
                        {"responded", false}}});
        it = pending.erase(it);
      } else {
        ++it;
      }
    }

    const SensorKind active = snap.active;
    const SensorView& av = snap[active];
    const bool opened_for_active =
        std::find(opened_now.begin(), opened_now.end(), active) != opened_now.end();

    // G4
    if (av.implicated && av.range == ErrorRange::Safety) {
      const bool open_for_active = open_during && open_during->sensor == active;
      const bool contested_mandatory =
          contest && contest->first == active && contest->second == DecisionLevel::Mandatory;
      if (!opened_for_active && !open_for_active && !contested_mandatory)
        out.push_back({RequirementId::G4MandatoryAlert, k,
                       {{"active", to_string(active)},
                        {"range", to_string(av.range)},
                        {"implicated", av.implicated},
                        {"alert_opened", false},
                        {"alert_open", false},
                        {"contested_mandatory", false}}});
    }

    // G5
    if (av.range == ErrorRange::Normal && opened_for_active)
      out.push_back({RequirementId::G5NormalNoAlert, k,
                     {{"active", to_string(active)},
                      {"range", to_string(av.range)},
                      {"alert_opened", true}}});

    // L2, vacuous on the first tick
    if (!av.reliable && previous) {
      const bool contested = contest && contest->first == active;
      const SensorView& pv = (*previous)[active];
      const bool newly_unreliable = pv.reliable || !pv.implicated;
      const bool alternative_before = previous->any_reliable();
      if (!contested && !newly_unreliable && alternative_before)
        out.push_back({RequirementId::L2UnreliableActive, k,
                       {{"active", to_string(active)},
                        {"reliable", false},
                        {"contested", false},
                        {"prev_reliable_or_unimplicated", false},
                        {"prev_reliable_available", true}}});
    }
    previous = &snap;
  }

  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return a.tick != b.tick ? a.tick < b.tick : a.req < b.req;
  });
  return out;
}

bool predicate_holds(const Violation& v) {
  const auto& b = v.bindings;
  auto flag = [&](const char* key) { return b.at(key).get<bool>(); };
  auto range = [&] { return *parse_range(b.at("range").get<std::string>()); };
  switch (v.req) {
    case RequirementId::G1NormalReliable:
      return range() != ErrorRange::Normal || flag("reliable");
    case RequirementId::G2SafetyUnreliable:
      return !(flag("implicated") && range() == ErrorRange::Safety) || !flag("reliable");
    case RequirementId::G3ResponseExpected:
      return flag("responded");
    case RequirementId::G4MandatoryAlert:
      return !(flag("implicated") && range() == ErrorRange::Safety) || flag("alert_opened") ||
             flag("alert_open") || flag("contested_mandatory");
    case RequirementId::G5NormalNoAlert:
      return range() != ErrorRange::Normal || !flag("alert_opened");
    case RequirementId::L2UnreliableActive:
      return flag("reliable") || flag("contested") || flag("prev_reliable_or_unimplicated") ||
             !flag("prev_reliable_available");
  }
  return true;
}

Trace extract_counterexample(const Trace& trace, const Violation& v) {
  Tick from = v.tick;
  if (v.req == RequirementId::L2UnreliableActive) from = v.tick - 1;
  if (v.req == RequirementId::G3ResponseExpected) from = v.bindings.at("opened_tick").get<Tick>();
  Trace out;
  for (const auto& e : trace)
    if (e.tick >= from && e.tick <= v.tick) out.push_back(e);
  return out;
}

}  // namespace leias
