#include "leias/flight_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "leias/errors.hpp"

namespace leias {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

double heading_to(Position from, Position to) {
  double deg = std::atan2(to.x - from.x, to.y - from.y) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

}  // namespace

void validate_schedule(const SensorSchedule& s) {
  std::visit(overloaded{
                 [](const schedule::None&) {},
                 [](const schedule::RandomUniform& r) {
                   if (!finite_nonneg(r.max_magnitude))
                     throw ConfigError("random_uniform: max_magnitude must be >= 0");
                 },
                 [](const schedule::Ramp& r) {
                   if (!(std::isfinite(r.rate_per_tick) && r.rate_per_tick > 0.0))
                     throw ConfigError("ramp: rate_per_tick must be > 0");
                   if (!finite_nonneg(r.cap)) throw ConfigError("ramp: cap must be >= 0");
                 },
                 [](const schedule::Fixed& f) {
                   if (!finite_nonneg(f.magnitude))
                     throw ConfigError("fixed: magnitude must be >= 0");
                   if (f.start_tick > f.end_tick)
                     throw ConfigError("fixed: start_tick must not exceed end_tick");
                 },
             },
             s);
}

std::optional<double> deterministic_magnitude(const SensorSchedule& s, Tick tick) noexcept {
  return std::visit(
      overloaded{
          [](const schedule::None&) -> std::optional<double> { return 0.0; },
          [](const schedule::RandomUniform&) -> std::optional<double> { return std::nullopt; },
          [tick](const schedule::Ramp& r) -> std::optional<double> {
            if (tick < r.start_tick) return 0.0;
            return std::min(r.cap, r.rate_per_tick * static_cast<double>(tick - r.start_tick));
          },
          [tick](const schedule::Fixed& f) -> std::optional<double> {
            return (tick >= f.start_tick && tick <= f.end_tick) ? f.magnitude : 0.0;
          },
      },
      s);
}

AircraftState initial_aircraft(const FlightProfile& profile) {
  AircraftState s;
  s.true_position = profile.start;
  s.altitude_ft = profile.altitude_ft;
  s.airspeed_kt = profile.airspeed_kt;
  return s;
}

AircraftState step_aircraft(const AircraftState& state, double dt_seconds,
                            std::span<const Position> route, const FlightProfile& profile) {
  AircraftState next = state;
  next.altitude_ft = profile.altitude_ft;
  next.airspeed_kt = profile.airspeed_kt;
  if (route_complete(state, route)) return next;

  const Position target = route[state.waypoint_index];
  const double step = profile.ground_speed * dt_seconds;
  const double remaining = distance(state.true_position, target);

  if (remaining <= step) {
    next.true_position = target;
    next.waypoint_index = state.waypoint_index + 1;
    if (remaining > 0.0) next.heading_deg = heading_to(state.true_position, target);
    return next;
  }

  const double f = step / remaining;
  next.true_position = {state.true_position.x + f * (target.x - state.true_position.x),
                        state.true_position.y + f * (target.y - state.true_position.y)};
  next.heading_deg = heading_to(state.true_position, target);
  return next;
}

SensorReadings read_sensors(const AircraftState& truth, const ErrorSchedule& schedule, Tick tick,
                            RandomStream& errors) {
  SensorReadings out{};
  for (auto sensor : kAllSensors) {
    const SensorSchedule& s = schedule[sensor];
    SensorReading& r = out[index_of(sensor)];
    r.sensor = sensor;
    r.tick = tick;
    r.reported_position = truth.true_position;
    if (std::holds_alternative<schedule::None>(s)) continue;

    double magnitude;
    if (auto fixed = deterministic_magnitude(s, tick)) {
      magnitude = *fixed;
    } else {
      magnitude = errors.uniform(0.0, std::get<schedule::RandomUniform>(s).max_magnitude);
    }
    const double angle = errors.uniform(0.0, 2.0 * std::numbers::pi);
    r.reported_position.x += magnitude * std::cos(angle);
    r.reported_position.y += magnitude * std::sin(angle);
  }
  return out;
}

}  // namespace leias
