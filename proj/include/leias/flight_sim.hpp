#pragma once

// Stand-in flight environment: a 2-D constant-speed waypoint follower and
// three position sensors with scheduled error injection.

#include <array>
#include <limits>
#include <span>
#include <variant>

#include "leias/core.hpp"
#include "leias/random.hpp"

namespace leias {

namespace schedule {

struct None {
  friend bool operator==(const None&, const None&) = default;
};

// Fresh magnitude drawn uniformly on [0, max_magnitude) every tick.
struct RandomUniform {
  double max_magnitude = 0.0;
  friend bool operator==(const RandomUniform&, const RandomUniform&) = default;
};

// min(cap, rate_per_tick * (tick - start_tick)) from start_tick on, zero before.
struct Ramp {
  Tick start_tick = 0;
  double rate_per_tick = 1.0;
  double cap = 0.0;
  friend bool operator==(const Ramp&, const Ramp&) = default;
};

// magnitude on [start_tick, end_tick], zero elsewhere. Open-ended by default.
struct Fixed {
  double magnitude = 0.0;
  Tick start_tick = 0;
  Tick end_tick = std::numeric_limits<Tick>::max();
  friend bool operator==(const Fixed&, const Fixed&) = default;
};

}  // namespace schedule

using SensorSchedule =
    std::variant<schedule::None, schedule::RandomUniform, schedule::Ramp, schedule::Fixed>;

// One schedule per sensor, indexed by SensorKind.
struct ErrorSchedule {
  std::array<SensorSchedule, 3> per_sensor{};

  const SensorSchedule& operator[](SensorKind s) const noexcept { return per_sensor[index_of(s)]; }
  SensorSchedule& operator[](SensorKind s) noexcept { return per_sensor[index_of(s)]; }
  friend bool operator==(const ErrorSchedule&, const ErrorSchedule&) = default;
};

// Throws ConfigError when a schedule violates its parameter ranges.
void validate_schedule(const SensorSchedule& s);

// Scheduled magnitude for deterministic kinds; nullopt for RandomUniform.
std::optional<double> deterministic_magnitude(const SensorSchedule& s, Tick tick) noexcept;

struct FlightProfile {
  Position start{0.0, 0.0};
  double altitude_ft = 1500.0;
  double airspeed_kt = 90.0;
  double ground_speed = 1.0;  // map units per second

  friend bool operator==(const FlightProfile&, const FlightProfile&) = default;
};

AircraftState initial_aircraft(const FlightProfile& profile);

// Advances toward route[waypoint_index]. Arrival (distance <= one step)
// snaps onto the waypoint and moves to the next one; past the last
// waypoint the aircraft is stationary.
AircraftState step_aircraft(const AircraftState& state, double dt_seconds,
                            std::span<const Position> route, const FlightProfile& profile);

inline bool route_complete(const AircraftState& s, std::span<const Position> route) noexcept {
  return s.waypoint_index >= route.size();
}

// Reported position = truth + offset with |offset| equal to the scheduled
// magnitude and a direction uniform on the circle. Draws come from `errors`
// in sensor order; None consumes nothing.
SensorReadings read_sensors(const AircraftState& truth, const ErrorSchedule& schedule, Tick tick,
                            RandomStream& errors);

}  // namespace leias
