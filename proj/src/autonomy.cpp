#include "leias/autonomy.hpp"

#include "leias/errors.hpp"
#include "leias/flight_sim.hpp"
#include "leias/pilot_models.hpp"

namespace leias {

namespace {

DecisionLevel level_for(ErrorRange r) noexcept {
  switch (r) {
    case ErrorRange::Normal: return DecisionLevel::Suppressed;
    case ErrorRange::Level1: return DecisionLevel::Low;
    case ErrorRange::Level2: return DecisionLevel::High;
    case ErrorRange::Safety: break;
  }
  return DecisionLevel::Mandatory;
}

class StepContext {
 public:
  StepContext(EngineState& s, const ScenarioConfig& c, Tick tick, std::vector<TraceEvent>& ev)
      : s_(s), c_(c), tick_(tick), events_(ev) {}

  void apply_reward(const AlertDecision& d, PilotResponse response) {
    if (!c_.learning) return;
    const auto reward = reward_from_alignment(d, response);
    if (!reward) return;
    const QKey key{d.sensor, *learnable_level(d.level), d.action};
    s_.q = update_q(s_.q, key, *reward, c_.learning_rate);
    events_.push_back(reward_applied_event(tick_, key, *reward, s_.q[key]));
    events_.push_back(policy_updated_event(tick_, s_.q));
  }

  void switch_to_recommended(std::string_view cause) {
    const SensorKind from = s_.authority.active;
    const SensorKind to = *s_.authority.recommended;
    s_.authority.active = to;
    s_.authority.recommended = select_recommended(s_.assessments, to);
    s_.contest.reset();
    events_.push_back(sensor_switched_event(tick_, from, to, cause));
  }

 private:
  EngineState& s_;
  const ScenarioConfig& c_;
  Tick tick_;
  std::vector<TraceEvent>& events_;
};

}  // namespace

std::optional<SensorKind> select_recommended(const AssessmentSet& assessments, SensorKind active) {
  std::optional<SensorKind> best;
  for (auto s : kAllSensors) {
    if (s == active || !assessments[s].reliable) continue;
    if (!best || assessments[s].error_value < assessments[*best].error_value) best = s;
  }
  return best;
}

EngineState initial_state(const ScenarioConfig& config, const QTable& q) {
  EngineState s;
  s.aircraft = initial_aircraft(config.aircraft);
  s.authority.active = config.initial_active;
  for (auto k : kAllSensors) {
    s.readings[index_of(k)] = {k, s.aircraft.true_position, 0};
    s.assessments[k].sensor = k;
  }
  s.q = q;
  s.temperature = temperature_at(config.selection_policy, 0);
  return s;
}

StepResult engine_step(const EngineState& state, std::optional<PilotResponse> pilot_input,
                       const ScenarioConfig& config, RngStreams& rng) {
  const bool responding = pilot_input && *pilot_input != PilotResponse::Neutral;
  if (responding && !state.alert)
    throw ResponseWithoutAlertError("pilot response " +
                                    std::string(to_string(*pilot_input)) +
                                    " at tick " + std::to_string(state.tick) +
                                    " with no open alert");

  StepResult out{state, {}};
  EngineState& s = out.state;
  auto& events = out.events;
  const Tick tick = state.tick;
  StepContext ctx(s, config, tick, events);

  if (tick == 0) events.push_back(policy_updated_event(tick, s.q));

  // 1. environment and assessment
  s.aircraft = step_aircraft(s.aircraft, config.dt_seconds(), config.waypoints, config.aircraft);
  s.readings = read_sensors(s.aircraft, config.error_schedule, tick, rng.errors);
  s.assessments = assess(pairwise_discrepancies(s.readings), config.thresholds);
  if (s.contest &&
      (s.contest->sensor != s.authority.active || s.assessments[s.authority.active].reliable))
    s.contest.reset();

  // 2. recommendation
  s.authority.recommended = select_recommended(s.assessments, s.authority.active);

  // 3. decision on the active sensor
  const SensorAssessment active = s.assessments[s.authority.active];
  if (!s.alert && active.implicated && active.range != ErrorRange::Normal &&
      (!s.contest || level_for(active.range) > s.contest->level)) {
    const AlertDecision d = decide(active, s.q, config.selection_policy, s.trial_index, rng.selection);
    if (learnable_level(d.level)) ++s.trial_index;
    if (d.action == AlertAction::Warn) {
      AlertState a;
      a.sensor = d.sensor;
      a.level = d.level;
      a.opened_tick = tick;
      a.deadline_tick = tick + config.window_ticks();
      a.decision = d;
      a.error_value = active.error_value;
      s.alert = a;
      events.push_back(alert_opened_event(tick, a.sensor, a.level, a.deadline_tick));
    } else {
      if (config.pilot_model.scripted())
        ctx.apply_reward(d, respond(config.pilot_model, d, active.error_value));
      if (config.autonomous_switching && s.authority.recommended && !s.contest)
        ctx.switch_to_recommended("policy");
    }
  }

  // 4. pilot response
  if (responding) {
    AlertState a = *s.alert;
    a.response = *pilot_input;
    a.resolved = true;
    s.alert.reset();
    events.push_back(pilot_responded_event(tick, a.response));
    ctx.apply_reward(a.decision, a.response);
    events.push_back(alert_resolved_event(tick, a.sensor, a.response, "response"));
    if (a.response == PilotResponse::Agree) {
      s.contest.reset();
      if (s.authority.recommended) ctx.switch_to_recommended("agree");
    } else if (a.sensor == s.authority.active && !s.assessments[a.sensor].reliable) {
      s.contest = Contest{a.sensor, a.level};
    }
  } else if (s.alert && tick >= s.alert->deadline_tick) {
    // 5. silent timeout
    const SensorKind alerted = s.alert->sensor;
    s.alert.reset();
    events.push_back(alert_resolved_event(tick, alerted, PilotResponse::Neutral, "timeout"));
    const bool below_t3 = s.assessments[s.authority.active].error_value < config.thresholds.t3;
    if (config.autonomous_switching && s.authority.recommended &&
        (!config.switch_requires_error_below_t3 || below_t3))
      ctx.switch_to_recommended("timeout");
  }

  // 6. snapshot
  s.temperature = temperature_at(config.selection_policy, s.trial_index);
  events.push_back(snapshot_event(s, tick));
  s.tick = tick + 1;
  return out;
}

std::optional<PilotResponse> scripted_input(const EngineState& state,
                                            const PilotModelSpec& pilot) {
  if (!state.alert || !pilot.scripted()) return std::nullopt;
  if (state.tick != state.alert->opened_tick + pilot.response_delay_ticks) return std::nullopt;
  return respond(pilot, state.alert->decision, state.alert->error_value);
}

nlohmann::json to_json(const AlertState& a) {
  return {{"sensor", to_string(a.sensor)},
          {"level", to_string(a.level)},
          {"opened_tick", a.opened_tick},
          {"deadline_tick", a.deadline_tick},
          {"response", to_string(a.response)},
          {"resolved", a.resolved}};
}

TraceEvent snapshot_event(const EngineState& s, Tick tick) {
  nlohmann::json authority = {{"active", to_string(s.authority.active)}, {"recommended", nullptr}};
  if (s.authority.recommended) authority["recommended"] = to_string(*s.authority.recommended);
  return {tick,
          EventKind::StateSnapshot,
          {{"aircraft", to_json(s.aircraft)},
           {"readings", to_json(s.readings)},
           {"assessments", to_json(s.assessments)},
           {"ambiguous", s.assessments.ambiguous},
           {"authority", authority},
           {"alert", s.alert ? to_json(*s.alert) : nlohmann::json(nullptr)}}};
}

}  // namespace leias
