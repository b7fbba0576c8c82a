#pragma once

// Domain vocabulary shared by every LEIAS module: sensors, error bands,
// pilot responses, alert levels and the learned action-value table.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace leias {

using Tick = std::int64_t;

// Declaration order is the tie-break order GPS < LIDAR < IMU.
enum class SensorKind : std::uint8_t { GPS = 0, LIDAR = 1, IMU = 2 };
inline constexpr std::array<SensorKind, 3> kAllSensors{SensorKind::GPS, SensorKind::LIDAR,
                                                       SensorKind::IMU};
constexpr std::size_t index_of(SensorKind s) noexcept { return static_cast<std::size_t>(s); }

enum class ErrorRange : std::uint8_t { Normal = 0, Level1 = 1, Level2 = 2, Safety = 3 };

enum class PilotResponse : std::uint8_t { Agree, Disagree, Neutral };

// Learnable alert levels: Low <-> Level1, High <-> Level2.
enum class AlertLevel : std::uint8_t { Low = 0, High = 1 };
inline constexpr std::array<AlertLevel, 2> kAllLevels{AlertLevel::Low, AlertLevel::High};

enum class AlertAction : std::uint8_t { Warn = 0, DoNotWarn = 1 };
inline constexpr std::array<AlertAction, 2> kAllActions{AlertAction::Warn, AlertAction::DoNotWarn};

// Severity of a decision. Suppressed and Mandatory are rule-driven; Low and
// High are learned. Ordered so that escalation compares with <.
enum class DecisionLevel : std::uint8_t { Suppressed = 0, Low = 1, High = 2, Mandatory = 3 };

std::string_view to_string(SensorKind s) noexcept;
std::string_view to_string(ErrorRange r) noexcept;
std::string_view to_string(PilotResponse r) noexcept;
std::string_view to_string(AlertLevel l) noexcept;
std::string_view to_string(AlertAction a) noexcept;
std::string_view to_string(DecisionLevel l) noexcept;

// Parsers accept the canonical spelling produced by to_string (and lower-case
// for sensors and responses). They return nullopt on anything else.
std::optional<SensorKind> parse_sensor(std::string_view s) noexcept;
std::optional<ErrorRange> parse_range(std::string_view s) noexcept;
std::optional<PilotResponse> parse_response(std::string_view s) noexcept;
std::optional<AlertLevel> parse_alert_level(std::string_view s) noexcept;
std::optional<AlertAction> parse_action(std::string_view s) noexcept;
std::optional<DecisionLevel> parse_decision_level(std::string_view s) noexcept;

std::optional<AlertLevel> learnable_level(ErrorRange r) noexcept;
std::optional<AlertLevel> learnable_level(DecisionLevel l) noexcept;
DecisionLevel to_decision_level(AlertLevel l) noexcept;

// Abstract map units; error values share the same unit.
struct Position {
  double x = 0.0;  // east
  double y = 0.0;  // north

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

struct AircraftState {
  Position true_position;
  double altitude_ft = 0.0;
  double airspeed_kt = 0.0;
  double heading_deg = 0.0;  // [0, 360), 0 = north, 90 = east
  std::size_t waypoint_index = 0;  // == route size once the route is complete

  friend bool operator==(const AircraftState&, const AircraftState&) = default;
};

// Half-open bands: Normal [0,t1), Level1 [t1,t2), Level2 [t2,t3), Safety [t3,inf).
struct RangeThresholds {
  double t1 = 3.0;
  double t2 = 9.0;
  double t3 = 15.0;

  bool valid() const noexcept {
    return std::isfinite(t1) && std::isfinite(t2) && std::isfinite(t3) && 0.0 < t1 && t1 < t2 &&
           t2 < t3;
  }
  friend bool operator==(const RangeThresholds&, const RangeThresholds&) = default;
};

struct SensorReading {
  SensorKind sensor = SensorKind::GPS;
  Position reported_position;
  Tick tick = 0;

  friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

using SensorReadings = std::array<SensorReading, 3>;

struct SensorAssessment {
  SensorKind sensor = SensorKind::GPS;
  double error_value = 0.0;
  ErrorRange range = ErrorRange::Normal;
  bool implicated = false;
  bool reliable = true;

  friend bool operator==(const SensorAssessment&, const SensorAssessment&) = default;
};

struct QKey {
  SensorKind sensor;
  AlertLevel level;
  AlertAction action;

  friend bool operator==(const QKey&, const QKey&) = default;
};

// "GPS.Low.Warn" style key used by the QTable file and trace payloads.
std::string to_string(const QKey& key);
std::optional<QKey> parse_qkey(std::string_view s) noexcept;

// Learned action values over the closed 3 x 2 x 2 domain. The key types are
// enums, so no lookup can fall outside the domain.
class QTable {
 public:
  static constexpr std::size_t kSize = 12;

  double operator[](const QKey& key) const noexcept { return values_[slot(key)]; }
  double& operator[](const QKey& key) noexcept { return values_[slot(key)]; }
  double value(SensorKind s, AlertLevel l, AlertAction a) const noexcept {
    return values_[slot({s, l, a})];
  }

  static constexpr std::size_t slot(const QKey& key) noexcept {
    return index_of(key.sensor) * 4 + static_cast<std::size_t>(key.level) * 2 +
           static_cast<std::size_t>(key.action);
  }
  static constexpr QKey key_at(std::size_t slot) noexcept {
    return {static_cast<SensorKind>(slot / 4), static_cast<AlertLevel>((slot / 2) % 2),
            static_cast<AlertAction>(slot % 2)};
  }

  const std::array<double, kSize>& values() const noexcept { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::array<double, kSize> values_{};
};

}  // namespace leias
