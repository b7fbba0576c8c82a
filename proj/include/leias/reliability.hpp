#pragma once

// Sensor-unreliability detection from pairwise positional discrepancies.

#include <array>

#include "leias/core.hpp"

namespace leias {

// Discrepancies are quantized to this resolution so that an error injected
// at exactly a band boundary classifies into that band despite the
// round-off of the polar offset.
inline constexpr double kDiscrepancyResolution = 1e-9;

struct DiscrepancyMatrix {
  double gps_lidar = 0.0;
  double gps_imu = 0.0;
  double lidar_imu = 0.0;

  // Symmetric lookup; between(s, s) is 0.
  double between(SensorKind a, SensorKind b) const noexcept;
  friend bool operator==(const DiscrepancyMatrix&, const DiscrepancyMatrix&) = default;
};

struct AssessmentSet {
  std::array<SensorAssessment, 3> sensors{};
  // Some discrepancy exceeded Normal but no single sensor stood out.
  bool ambiguous = false;

  const SensorAssessment& operator[](SensorKind s) const noexcept { return sensors[index_of(s)]; }
  SensorAssessment& operator[](SensorKind s) noexcept { return sensors[index_of(s)]; }
  // The implicated sensor, if any (at most one).
  std::optional<SensorKind> implicated() const noexcept;
  friend bool operator==(const AssessmentSet&, const AssessmentSet&) = default;
};

DiscrepancyMatrix pairwise_discrepancies(const SensorReadings& readings);

ErrorRange classify(double error_value, const RangeThresholds& thresholds) noexcept;

// Odd-one-out implication: S is implicated iff both discrepancies involving
// S classify above Normal while the other pair classifies Normal.
AssessmentSet assess(const DiscrepancyMatrix& matrix, const RangeThresholds& thresholds);

}  // namespace leias
