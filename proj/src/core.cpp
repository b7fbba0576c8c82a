#include "leias/core.hpp"

#include <algorithm>
#include <cctype>

namespace leias {

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view to_string(SensorKind s) noexcept {
  switch (s) {
    case SensorKind::GPS: return "GPS";
    case SensorKind::LIDAR: return "LIDAR";
    case SensorKind::IMU: return "IMU";
  }
  return "?";
}

std::string_view to_string(ErrorRange r) noexcept {
  switch (r) {
    case ErrorRange::Normal: return "Normal";
    case ErrorRange::Level1: return "Level1";
    case ErrorRange::Level2: return "Level2";
    case ErrorRange::Safety: return "Safety";
  }
  return "?";
}

std::string_view to_string(PilotResponse r) noexcept {
  switch (r) {
    case PilotResponse::Agree: return "Agree";
    case PilotResponse::Disagree: return "Disagree";
    case PilotResponse::Neutral: return "Neutral";
  }
  return "?";
}

std::string_view to_string(AlertLevel l) noexcept {
  return l == AlertLevel::Low ? "Low" : "High";
}

std::string_view to_string(AlertAction a) noexcept {
  return a == AlertAction::Warn ? "Warn" : "DoNotWarn";
}

std::string_view to_string(DecisionLevel l) noexcept {
  switch (l) {
    case DecisionLevel::Suppressed: return "Suppressed";
    case DecisionLevel::Low: return "Low";
    case DecisionLevel::High: return "High";
    case DecisionLevel::Mandatory: return "Mandatory";
  }
  return "?";
}

std::optional<SensorKind> parse_sensor(std::string_view s) noexcept {
  for (auto k : kAllSensors)
    if (iequals(s, to_string(k))) return k;
  return std::nullopt;
}

std::optional<ErrorRange> parse_range(std::string_view s) noexcept {
  for (auto r : {ErrorRange::Normal, ErrorRange::Level1, ErrorRange::Level2, ErrorRange::Safety})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

std::optional<PilotResponse> parse_response(std::string_view s) noexcept {
  for (auto r : {PilotResponse::Agree, PilotResponse::Disagree, PilotResponse::Neutral})
    if (iequals(s, to_string(r))) return r;
  return std::nullopt;
}

std::optional<AlertLevel> parse_alert_level(std::string_view s) noexcept {
  for (auto l : kAllLevels)
    if (s == to_string(l)) return l;
  return std::nullopt;
}

std::optional<AlertAction> parse_action(std::string_view s) noexcept {
  for (auto a : kAllActions)
    if (s == to_string(a)) return a;
  return std::nullopt;
}

std::optional<DecisionLevel> parse_decision_level(std::string_view s) noexcept {
  for (auto l : {DecisionLevel::Suppressed, DecisionLevel::Low, DecisionLevel::High,
                 DecisionLevel::Mandatory})
    if (s == to_string(l)) return l;
  return std::nullopt;
}

std::optional<AlertLevel> learnable_level(ErrorRange r) noexcept {
  if (r == ErrorRange::Level1) return AlertLevel::Low;
  if (r == ErrorRange::Level2) return AlertLevel::High;
  return std::nullopt;
}

std::optional<AlertLevel> learnable_level(DecisionLevel l) noexcept {
  if (l == DecisionLevel::Low) return AlertLevel::Low;
  if (l == DecisionLevel::High) return AlertLevel::High;
  return std::nullopt;
}

DecisionLevel to_decision_level(AlertLevel l) noexcept {
  return l == AlertLevel::Low ? DecisionLevel::Low : DecisionLevel::High;
}

std::string to_string(const QKey& key) {
  std::string out{to_string(key.sensor)};
  out += '.';
  out += to_string(key.level);
  out += '.';
  out += to_string(key.action);
  return out;
}

std::optional<QKey> parse_qkey(std::string_view s) noexcept {
  const auto first = s.find('.');
  if (first == std::string_view::npos) return std::nullopt;
  const auto second = s.find('.', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  auto sensor = s.substr(0, first);
  auto level = parse_alert_level(s.substr(first + 1, second - first - 1));
  auto action = parse_action(s.substr(second + 1));
  // Keys are case-sensitive: exactly the spelling QTable files are written with.
  std::optional<SensorKind> kind;
  for (auto k : kAllSensors)
    if (sensor == to_string(k)) kind = k;
  if (!kind || !level || !action) return std::nullopt;
  return QKey{*kind, *level, *action};
}

}  // namespace leias
