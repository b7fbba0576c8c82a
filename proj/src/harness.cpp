#include "leias/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "leias/errors.hpp"
#include "leias/flight_sim.hpp"
#include "leias/reliability.hpp"

namespace leias {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// The training assessment: one implicated sensor at the drawn error, the
// other two agreeing with each other.
AssessmentSet training_assessment(SensorKind sensor, double error, const RangeThresholds& t) {
  AssessmentSet a;
  for (auto s : kAllSensors) {
    a[s].sensor = s;
    a[s].range = ErrorRange::Normal;
  }
  a[sensor].implicated = true;
  a[sensor].error_value = error;
  a[sensor].range = classify(error, t);
  a[sensor].reliable = a[sensor].range == ErrorRange::Normal;
  return a;
}

}  // namespace

json to_json(const TrialRecord& r) {
  return {{"trial", r.trial_index},
          {"sensor", to_string(r.sensor)},
          {"level", to_string(r.level)},
          {"error", r.error_value},
          {"action", to_string(r.action)},
          {"response", to_string(r.response)},
          {"reward", r.reward ? json(*r.reward) : json(nullptr)},
          {"q_after", r.q_after ? json(*r.q_after) : json(nullptr)},
          {"temperature", r.temperature}};
}

TrainingResult run_training(const ScenarioConfig& config, std::int64_t trials,
                            const QTable& initial) {
  if (!config.pilot_model.scripted())
    throw ConfigError("training needs a scripted pilot (table or threshold)");
  if (trials < 0) throw ConfigError("trial count must be >= 0");

  TrainingResult out;
  out.q = initial;
  RngStreams rng(config.seed);
  const auto& t = config.thresholds;

  EngineState view = initial_state(config, initial);
  double cumulative = 0.0;
  if (trials > 0) out.trace.push_back(policy_updated_event(0, out.q));

  for (std::int64_t i = 0; i < trials; ++i) {
    const SensorKind sensor = kAllSensors[rng.trials.below(3)];
    const double error = rng.trials.uniform(t.t1, t.t3);
    const AssessmentSet assessments = training_assessment(sensor, error, t);

    const AlertDecision d = decide(assessments[sensor], out.q, config.selection_policy, i,
                                   rng.selection);
    const PilotResponse response = respond(config.pilot_model, d, error);
    const auto reward = reward_from_alignment(d, response);

    TrialRecord rec{i, sensor, d.level, error, d.action, response, reward, std::nullopt,
                    d.temperature};
    if (const auto level = learnable_level(d.level)) {
      const QKey key{sensor, *level, d.action};
      if (reward) {
        out.q = update_q(out.q, key, *reward, config.learning_rate);
        cumulative += *reward;
        out.trace.push_back(reward_applied_event(i, key, *reward, out.q[key]));
        out.trace.push_back(policy_updated_event(i, out.q));
      }
      rec.q_after = out.q[key];
    }
    out.records.push_back(rec);

    // Display snapshot: the implicated sensor offset from the truth.
    view.aircraft = step_aircraft(view.aircraft, config.dt_seconds(), config.waypoints,
                                  config.aircraft);
    const double angle = rng.errors.uniform(0.0, 2.0 * std::numbers::pi);
    for (auto s : kAllSensors) {
      auto& r = view.readings[index_of(s)];
      r = {s, view.aircraft.true_position, i};
      if (s == sensor) {
        r.reported_position.x += error * std::cos(angle);
        r.reported_position.y += error * std::sin(angle);
      }
    }
    view.assessments = assessments;
    view.authority.recommended = select_recommended(assessments, view.authority.active);
    view.q = out.q;
    view.trial_index = i + 1;
    out.trace.push_back(snapshot_event(view, i));

    if ((i + 1) % kCurveStride == 0) out.curve.push_back({i + 1, cumulative, out.q});
  }
  return out;
}

bool TestingResult::passed() const noexcept {
  for (const auto& s : sensors)
    if (!s.first_safety_tick || !s.mandatory_at_safety) return false;
  return true;
}

TestingResult run_testing(const ScenarioConfig& config, const QTable& q) {
  TestingResult out;
  const SelectionPolicy frozen = BoltzmannFixed{terminal_temperature(config.selection_policy)};
  const auto& t = config.thresholds;
  RngStreams rng(config.seed);

  for (auto sensor : kAllSensors) {
    SensorTestResult& res = out.sensors[index_of(sensor)];
    res.sensor = sensor;
    res.mandatory_at_safety = true;

    const double rate = config.test_ramp_rate;
    const double cap = t.t3 + 2.0 * rate;
    ErrorSchedule schedule;
    schedule[sensor] = schedule::Ramp{0, rate, cap};
    const Tick last = static_cast<Tick>(std::ceil(cap / rate));

    AircraftState aircraft = initial_aircraft(config.aircraft);
    for (Tick tick = 0; tick <= last; ++tick) {
      aircraft = step_aircraft(aircraft, config.dt_seconds(), config.waypoints, config.aircraft);
      const auto readings = read_sensors(aircraft, schedule, tick, rng.errors);
      const SensorAssessment a = assess(pairwise_discrepancies(readings), t)[sensor];

      AlertDecision d{sensor, DecisionLevel::Suppressed, AlertAction::DoNotWarn,
                      std::get<BoltzmannFixed>(frozen).temperature, 1.0};
      if (a.implicated) d = decide(a, q, frozen, tick, rng.selection);

      TrialRecord rec{tick, sensor, d.level, a.error_value, d.action, PilotResponse::Neutral,
                      std::nullopt, std::nullopt, d.temperature};
      if (const auto level = learnable_level(d.level)) rec.q_after = q.value(sensor, *level, d.action);
      res.records.push_back(rec);

      if (a.implicated && a.range != ErrorRange::Normal && !res.first_level1_tick)
        res.first_level1_tick = tick;
      if (a.range == ErrorRange::Safety) {
        if (!res.first_safety_tick) res.first_safety_tick = tick;
        if (d.level != DecisionLevel::Mandatory || d.action != AlertAction::Warn)
          res.mandatory_at_safety = false;
      }
      if (d.action == AlertAction::Warn && !res.first_alert_tick) {
        res.first_alert_tick = tick;
        res.first_alert_error = a.error_value;
        res.first_alert_level = d.level;
      }
    }
  }
  return out;
}

SimulationResult run_simulation(const ScenarioConfig& config, const SimulationOptions& options) {
  SimulationResult out;
  EngineState state = initial_state(config, options.initial_q);
  RngStreams rng(config.seed);
  const Tick limit = options.ticks.value_or(config.max_ticks);
  const bool console = std::holds_alternative<pilot::Console>(config.pilot_model.kind);

  while (state.tick < limit) {
    std::optional<PilotResponse> input;
    if (console) {
      if (auto it = options.script.find(state.tick); it != options.script.end()) input = it->second;
    } else {
      input = scripted_input(state, config.pilot_model);
    }
    StepResult step = engine_step(state, input, config, rng);
    out.trace.insert(out.trace.end(), step.events.begin(), step.events.end());
    state = std::move(step.state);
    if (!options.ticks && route_complete(state.aircraft, config.waypoints)) break;
  }
  out.final_state = std::move(state);
  return out;
}

TraceHeader make_header(const ScenarioConfig& config, RunMode mode, std::int64_t trials,
                        const QTable& initial_q) {
  TraceHeader h;
  h.config = config_to_json(config);
  h.seed = config.seed;
  h.mode = mode;
  h.trials = trials;
  if (initial_q != QTable{}) h.initial_q = initial_q;
  return h;
}

std::vector<std::string> render_trace(const TraceHeader& header, const Trace& events) {
  std::vector<std::string> lines;
  lines.reserve(events.size() + 1);
  lines.push_back(to_line(header));
  for (const auto& e : events) lines.push_back(to_line(e));
  return lines;
}

void replay(const TraceFile& recorded) {
  if (!recorded.header) throw MalformedTraceError("trace has no header line");
  const TraceHeader& h = *recorded.header;
  if (h.version != kArtifactVersion)
    throw DivergenceError("trace written by \"" + h.version + "\", replaying with \"" +
                              std::string(kArtifactVersion) + "\"",
                          -1);
  ScenarioConfig config;
  try {
    config = config_from_json(h.config);
  } catch (const ConfigError& e) {
    throw DivergenceError(std::string("recorded config no longer loads: ") + e.what(), -1);
  }
  if (config.seed != h.seed) throw DivergenceError("header seed disagrees with config seed", -1);
  const QTable initial_q = h.initial_q.value_or(QTable{});

  Trace regenerated;
  switch (h.mode) {
    case RunMode::Train:
      regenerated = run_training(config, h.trials, initial_q).trace;
      break;
    case RunMode::Simulate:
      regenerated = run_simulation(config, {{}, std::nullopt, initial_q}).trace;
      break;
    case RunMode::Interactive: {
      SimulationOptions opts;
      opts.initial_q = initial_q;
      Tick ticks = 0;
      for (const auto& e : recorded.events) {
        if (e.kind == EventKind::StateSnapshot) ++ticks;
        if (e.kind == EventKind::PilotResponded) {
          const auto r = parse_response(e.payload.value("response", ""));
          if (!r) throw MalformedTraceError("bad PilotResponded at tick " + std::to_string(e.tick));
          opts.script[e.tick] = *r;
        }
      }
      opts.ticks = ticks;
      regenerated = run_simulation(config, opts).trace;
      break;
    }
    case RunMode::Test:
      throw MalformedTraceError("testing runs do not record replayable traces");
  }

  const auto lines = render_trace(make_header(config, h.mode, h.trials, initial_q), regenerated);
  const std::size_t common = std::min(lines.size(), recorded.lines.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (lines[i] == recorded.lines[i]) continue;
    if (i == 0) throw DivergenceError("header differs from the regenerated header", -1);
    const Tick tick = recorded.events[i - 1].tick;
    throw DivergenceError("first difference at line " + std::to_string(i + 1) + " (tick " +
                              std::to_string(tick) + ")",
                          tick);
  }
  if (lines.size() != recorded.lines.size()) {
    const Tick tick = common > 1 ? recorded.events[common - 2].tick + 1 : 0;
    throw DivergenceError("regenerated trace has " + std::to_string(lines.size()) +
                              " lines, recorded has " + std::to_string(recorded.lines.size()),
                          tick);
  }
}

std::string curve_csv(const std::vector<CurveRow>& curve) {
  std::string out = "trial,cumulative_reward";
  for (std::size_t i = 0; i < QTable::kSize; ++i) out += "," + to_string(QTable::key_at(i));
  out += '\n';
  for (const auto& row : curve) {
    out += std::to_string(row.trial) + "," + fmt_double(row.cumulative_reward);
    for (double v : row.q.values()) out += "," + fmt_double(v);
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) {
    text += l;
    text += '\n';
  }
  write_text(path, text);
}

void write_qtable(const std::filesystem::path& path, const QTable& q) {
  write_text(path, q_json(q).dump(2) + "\n");
}

QTable read_qtable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open QTable " + path.string());
  try {
    return q_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error("QTable " + path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace leias
