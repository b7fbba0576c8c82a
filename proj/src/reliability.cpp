#include "leias/reliability.hpp"

#include <algorithm>
#include <cmath>

namespace leias {

namespace {

double quantize(double d) noexcept {
  return std::round(d / kDiscrepancyResolution) * kDiscrepancyResolution;
}

// The two sensors other than s, in tie-break order.
std::array<SensorKind, 2> others(SensorKind s) noexcept {
  switch (s) {
    case SensorKind::GPS: return {SensorKind::LIDAR, SensorKind::IMU};
    case SensorKind::LIDAR: return {SensorKind::GPS, SensorKind::IMU};
    case SensorKind::IMU: break;
  }
  return {SensorKind::GPS, SensorKind::LIDAR};
}

}  // namespace

double DiscrepancyMatrix::between(SensorKind a, SensorKind b) const noexcept {
  if (a == b) return 0.0;
  if (index_of(a) > index_of(b)) std::swap(a, b);
  if (a == SensorKind::GPS) return b == SensorKind::LIDAR ? gps_lidar : gps_imu;
  return lidar_imu;
}

std::optional<SensorKind> AssessmentSet::implicated() const noexcept {
  for (const auto& a : sensors)
    if (a.implicated) return a.sensor;
  return std::nullopt;
}

DiscrepancyMatrix pairwise_discrepancies(const SensorReadings& readings) {
  const auto& gps = readings[index_of(SensorKind::GPS)].reported_position;
  const auto& lidar = readings[index_of(SensorKind::LIDAR)].reported_position;
  const auto& imu = readings[index_of(SensorKind::IMU)].reported_position;
  return {quantize(distance(gps, lidar)), quantize(distance(gps, imu)),
          quantize(distance(lidar, imu))};
}

ErrorRange classify(double error_value, const RangeThresholds& t) noexcept {
  if (error_value < t.t1) return ErrorRange::Normal;
  if (error_value < t.t2) return ErrorRange::Level1;
  if (error_value < t.t3) return ErrorRange::Level2;
  return ErrorRange::Safety;
}

AssessmentSet assess(const DiscrepancyMatrix& m, const RangeThresholds& t) {
  auto above_normal = [&](double d) { return classify(d, t) != ErrorRange::Normal; };

  std::optional<SensorKind> odd;
  for (auto s : kAllSensors) {
    const auto [a, b] = others(s);
    if (above_normal(m.between(s, a)) && above_normal(m.between(s, b)) &&
        !above_normal(m.between(a, b))) {
      odd = s;
      break;
    }
  }

  AssessmentSet out;
  for (auto s : kAllSensors) {
    SensorAssessment& a = out[s];
    a.sensor = s;
    const auto [p, q] = others(s);
    if (odd == s) {
      a.implicated = true;
      a.error_value = 0.5 * (m.between(s, p) + m.between(s, q));
    } else if (odd) {
      a.error_value = 0.0;
    } else {
      a.error_value = std::max(m.between(s, p), m.between(s, q));
    }
    a.range = classify(a.error_value, t);
    a.reliable = !a.implicated || a.range == ErrorRange::Normal;
  }
  out.ambiguous = !odd && (above_normal(m.gps_lidar) || above_normal(m.gps_imu) ||
                           above_normal(m.lidar_imu));
  return out;
}

}  // namespace leias
