#include "leias/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "leias/errors.hpp"

namespace leias {

using nlohmann::json;

namespace {

constexpr double kIntegralTolerance = 1e-9;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

const json& require_object(const json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  return j;
}

Position parse_position(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("x") && j.contains("y") && j["x"].is_number() &&
      j["y"].is_number())
    return {j["x"].get<double>(), j["y"].get<double>()};
  throw ConfigError("position must be {\"x\":..,\"y\":..} or [x, y]");
}

json position_json(Position p) { return {{"x", p.x}, {"y", p.y}}; }

SensorSchedule parse_schedule(const json& j) {
  require_object(j, "error_schedule entry");
  const auto kind = get_or<std::string>(j, "kind", "none");
  SensorSchedule out;
  if (kind == "none") {
    out = schedule::None{};
  } else if (kind == "random_uniform") {
    out = schedule::RandomUniform{get_or(j, "max_magnitude", 0.0)};
  } else if (kind == "ramp") {
    out = schedule::Ramp{get_or<Tick>(j, "start_tick", 0), get_or(j, "rate_per_tick", 1.0),
                         get_or(j, "cap", 0.0)};
  } else if (kind == "fixed") {
    out = schedule::Fixed{get_or(j, "magnitude", 0.0), get_or<Tick>(j, "start_tick", 0),
                          get_or<Tick>(j, "end_tick", std::numeric_limits<Tick>::max())};
  } else {
    throw ConfigError("unknown error_schedule kind \"" + kind + "\"");
  }
  validate_schedule(out);
  return out;
}

const char* schedule_key(SensorKind s) {
  switch (s) {
    case SensorKind::GPS: return "gps";
    case SensorKind::LIDAR: return "lidar";
    case SensorKind::IMU: return "imu";
  }
  return "?";
}

PreferenceTable parse_preferences(const json& j) {
  require_object(j, "preferences");
  PreferenceTable t = PreferenceTable::reference_pilot();
  for (auto s : kAllSensors) {
    for (auto l : kAllLevels) {
      const std::string key = std::string(to_string(s)) + "." + std::string(to_string(l));
      if (!j.contains(key)) continue;
      const auto action = parse_action(get_or<std::string>(j, key.c_str(), ""));
      if (!action) throw ConfigError("preference " + key + " must be Warn or DoNotWarn");
      t.set(s, l, *action);
    }
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto s : kAllSensors)
      for (auto l : kAllLevels)
        known |= key == std::string(to_string(s)) + "." + std::string(to_string(l));
    if (!known) throw ConfigError("unknown preference cell \"" + key + "\"");
  }
  return t;
}

PilotModelSpec parse_pilot(const json& j) {
  require_object(j, "pilot_model");
  PilotModelSpec spec;
  const auto kind = get_or<std::string>(j, "kind", "table");
  if (kind == "table") {
    pilot::Table t;
    if (j.contains("preferences")) t.preferences = parse_preferences(j["preferences"]);
    spec.kind = t;
  } else if (kind == "threshold") {
    spec.kind = pilot::Threshold{get_or(j, "theta", 9.0)};
  } else if (kind == "silent") {
    spec.kind = pilot::Silent{};
  } else if (kind == "console") {
    spec.kind = pilot::Console{};
  } else {
    throw ConfigError("unknown pilot_model kind \"" + kind + "\"");
  }
  spec.response_delay_ticks = get_or<Tick>(j, "response_delay_ticks", 1);
  return spec;
}

SelectionPolicy parse_policy(const json& j) {
  require_object(j, "selection_policy");
  const auto kind = get_or<std::string>(j, "kind", "anneal");
  SelectionPolicy p;
  if (kind == "boltzmann" || kind == "fixed") {
    p = BoltzmannFixed{get_or(j, "temperature", kDefaultHighTemperature)};
  } else if (kind == "anneal") {
    Annealing a;
    a.tau0 = get_or(j, "tau0", a.tau0);
    a.decay = get_or(j, "decay", a.decay);
    a.floor = get_or(j, "floor", a.floor);
    p = a;
  } else {
    throw ConfigError("unknown selection_policy kind \"" + kind + "\"");
  }
  return p;
}

}  // namespace

Tick ScenarioConfig::window_ticks() const noexcept {
  return static_cast<Tick>(std::llround(response_window_s * tick_hz));
}

const ScenarioConfig& validate_config(const ScenarioConfig& c) {
  if (!c.thresholds.valid())
    throw ThresholdOrderError("thresholds must satisfy 0 < t1 < t2 < t3");
  if (c.waypoints.empty()) throw EmptyRouteError("route needs at least one waypoint");
  for (const auto& w : c.waypoints)
    if (!std::isfinite(w.x) || !std::isfinite(w.y)) throw ConfigError("waypoint not finite");
  if (!(std::isfinite(c.tick_hz) && c.tick_hz > 0.0)) throw ConfigError("tick_hz must be > 0");
  if (!(std::isfinite(c.response_window_s) && c.response_window_s > 0.0))
    throw ConfigError("response_window_s must be > 0");
  const double ticks = c.response_window_s * c.tick_hz;
  if (std::abs(ticks - std::round(ticks)) > kIntegralTolerance || std::round(ticks) < 1.0) {
    std::ostringstream os;
    os << "response window of " << c.response_window_s << " s at " << c.tick_hz
       << " Hz is " << ticks << " ticks; it must be a positive integer";
    throw NonIntegralDeadlineError(os.str());
  }
  for (const auto& s : c.error_schedule.per_sensor) validate_schedule(s);
  validate_policy(c.selection_policy);
  if (!(std::isfinite(c.learning_rate) && c.learning_rate > 0.0 && c.learning_rate <= 1.0))
    throw ConfigError("learning_rate must lie in (0, 1]");
  if (const auto* t = std::get_if<pilot::Threshold>(&c.pilot_model.kind))
    if (!(std::isfinite(t->theta) && t->theta >= 0.0))
      throw ConfigError("threshold pilot theta must be >= 0");
  if (c.pilot_model.response_delay_ticks < 1)
    throw ConfigError("response_delay_ticks must be >= 1");
  const auto& a = c.aircraft;
  if (!(std::isfinite(a.ground_speed) && a.ground_speed >= 0.0) ||
      !(std::isfinite(a.altitude_ft) && a.altitude_ft >= 0.0) ||
      !(std::isfinite(a.airspeed_kt) && a.airspeed_kt >= 0.0) || !std::isfinite(a.start.x) ||
      !std::isfinite(a.start.y))
    throw ConfigError("aircraft profile out of range");
  if (c.max_ticks < 0) throw ConfigError("max_ticks must be >= 0");
  if (!(std::isfinite(c.test_ramp_rate) && c.test_ramp_rate > 0.0))
    throw ConfigError("testing ramp_rate must be > 0");
  return c;
}

ScenarioConfig config_from_json(const json& j) {
  require_object(j, "scenario");
  ScenarioConfig c;
  if (j.contains("waypoints")) {
    if (!j["waypoints"].is_array()) throw ConfigError("waypoints must be an array");
    c.waypoints.clear();
    for (const auto& w : j["waypoints"]) c.waypoints.push_back(parse_position(w));
  }
  c.tick_hz = get_or(j, "tick_hz", c.tick_hz);
  if (j.contains("thresholds")) {
    const auto& t = require_object(j["thresholds"], "thresholds");
    c.thresholds.t1 = get_or(t, "t1", c.thresholds.t1);
    c.thresholds.t2 = get_or(t, "t2", c.thresholds.t2);
    c.thresholds.t3 = get_or(t, "t3", c.thresholds.t3);
  }
  if (j.contains("error_schedule")) {
    const auto& es = require_object(j["error_schedule"], "error_schedule");
    for (auto s : kAllSensors)
      if (es.contains(schedule_key(s))) c.error_schedule[s] = parse_schedule(es[schedule_key(s)]);
    for (const auto& [key, value] : es.items())
      if (key != "gps" && key != "lidar" && key != "imu")
        throw ConfigError("unknown sensor \"" + key + "\" in error_schedule");
  }
  if (j.contains("pilot_model")) c.pilot_model = parse_pilot(j["pilot_model"]);
  if (j.contains("selection_policy")) c.selection_policy = parse_policy(j["selection_policy"]);
  c.response_window_s = get_or(j, "response_window_s", c.response_window_s);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.learning_rate = get_or(j, "learning_rate", c.learning_rate);
  if (j.contains("aircraft")) {
    const auto& a = require_object(j["aircraft"], "aircraft");
    if (a.contains("start")) c.aircraft.start = parse_position(a["start"]);
    c.aircraft.altitude_ft = get_or(a, "altitude_ft", c.aircraft.altitude_ft);
    c.aircraft.airspeed_kt = get_or(a, "airspeed_kt", c.aircraft.airspeed_kt);
    c.aircraft.ground_speed = get_or(a, "ground_speed", c.aircraft.ground_speed);
  }
  if (j.contains("initial_active")) {
    const auto s = parse_sensor(get_or<std::string>(j, "initial_active", ""));
    if (!s) throw ConfigError("initial_active must be GPS, LIDAR or IMU");
    c.initial_active = *s;
  }
  c.learning = get_or(j, "learning", c.learning);
  c.autonomous_switching = get_or(j, "autonomous_switching", c.autonomous_switching);
  c.switch_requires_error_below_t3 =
      get_or(j, "switch_requires_error_below_t3", c.switch_requires_error_below_t3);
  c.max_ticks = get_or<Tick>(j, "max_ticks", c.max_ticks);
  if (j.contains("testing"))
    c.test_ramp_rate = get_or(require_object(j["testing"], "testing"), "ramp_rate", c.test_ramp_rate);
  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json to_json(const SelectionPolicy& p) {
  if (const auto* f = std::get_if<BoltzmannFixed>(&p))
    return {{"kind", "boltzmann"}, {"temperature", f->temperature}};
  const auto& a = std::get<Annealing>(p);
  return {{"kind", "anneal"}, {"tau0", a.tau0}, {"decay", a.decay}, {"floor", a.floor}};
}

json to_json(const SensorSchedule& s) {
  if (std::holds_alternative<schedule::None>(s)) return {{"kind", "none"}};
  if (const auto* r = std::get_if<schedule::RandomUniform>(&s))
    return {{"kind", "random_uniform"}, {"max_magnitude", r->max_magnitude}};
  if (const auto* r = std::get_if<schedule::Ramp>(&s))
    return {{"kind", "ramp"},
            {"start_tick", r->start_tick},
            {"rate_per_tick", r->rate_per_tick},
            {"cap", r->cap}};
  const auto& f = std::get<schedule::Fixed>(s);
  return {{"kind", "fixed"},
          {"magnitude", f.magnitude},
          {"start_tick", f.start_tick},
          {"end_tick", f.end_tick}};
}

json to_json(const PilotModelSpec& p) {
  json j;
  if (const auto* t = std::get_if<pilot::Table>(&p.kind)) {
    j["kind"] = "table";
    json prefs = json::object();
    for (auto s : kAllSensors)
      for (auto l : kAllLevels)
        prefs[std::string(to_string(s)) + "." + std::string(to_string(l))] =
            to_string(t->preferences(s, l));
    j["preferences"] = prefs;
  } else if (const auto* t = std::get_if<pilot::Threshold>(&p.kind)) {
    j["kind"] = "threshold";
    j["theta"] = t->theta;
  } else if (std::holds_alternative<pilot::Silent>(p.kind)) {
    j["kind"] = "silent";
  } else {
    j["kind"] = "console";
  }
  j["response_delay_ticks"] = p.response_delay_ticks;
  return j;
}

json config_to_json(const ScenarioConfig& c) {
  json waypoints = json::array();
  for (const auto& w : c.waypoints) waypoints.push_back(position_json(w));
  json schedule = json::object();
  for (auto s : kAllSensors) schedule[schedule_key(s)] = to_json(c.error_schedule[s]);
  return {
      {"waypoints", waypoints},
      {"tick_hz", c.tick_hz},
      {"thresholds", {{"t1", c.thresholds.t1}, {"t2", c.thresholds.t2}, {"t3", c.thresholds.t3}}},
      {"error_schedule", schedule},
      {"pilot_model", to_json(c.pilot_model)},
      {"selection_policy", to_json(c.selection_policy)},
      {"response_window_s", c.response_window_s},
      {"seed", c.seed},
      {"learning_rate", c.learning_rate},
      {"aircraft",
       {{"start", position_json(c.aircraft.start)},
        {"altitude_ft", c.aircraft.altitude_ft},
        {"airspeed_kt", c.aircraft.airspeed_kt},
        {"ground_speed", c.aircraft.ground_speed}}},
      {"initial_active", to_string(c.initial_active)},
      {"learning", c.learning},
      {"autonomous_switching", c.autonomous_switching},
      {"switch_requires_error_below_t3", c.switch_requires_error_below_t3},
      {"max_ticks", c.max_ticks},
      {"testing", {{"ramp_rate", c.test_ramp_rate}}},
  };
}

SelectionPolicy parse_policy_flag(const std::string& flag) {
  if (flag == "anneal") return Annealing{};
  const std::string prefix = "fixed:";
  if (flag.rfind(prefix, 0) == 0) {
    const std::string arg = flag.substr(prefix.size());
    double tau;
    if (arg == "high") {
      tau = kDefaultHighTemperature;
    } else if (arg == "low") {
      tau = kDefaultLowTemperature;
    } else {
      try {
        std::size_t used = 0;
        tau = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument(arg);
      } catch (const std::exception&) {
        throw ConfigError("--policy fixed:<tau> needs a number, got \"" + arg + "\"");
      }
    }
    SelectionPolicy p = BoltzmannFixed{tau};
    validate_policy(p);
    return p;
  }
  throw ConfigError("--policy must be fixed:<tau> or anneal, got \"" + flag + "\"");
}

}  // namespace leias
