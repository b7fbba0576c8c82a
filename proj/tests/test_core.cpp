#include "doctest.h"
#include "leias/core.hpp"

#include <set>
#include <string>

using namespace leias;

TEST_CASE("enum names round trip") {
  for (auto s : kAllSensors) CHECK(parse_sensor(to_string(s)) == s);
  for (auto r : {ErrorRange::Normal, ErrorRange::Level1, ErrorRange::Level2, ErrorRange::Safety})
    CHECK(parse_range(to_string(r)) == r);
  for (auto l : kAllLevels) CHECK(parse_alert_level(to_string(l)) == l);
  for (auto a : kAllActions) CHECK(parse_action(to_string(a)) == a);
  for (auto l : {DecisionLevel::Suppressed, DecisionLevel::Low, DecisionLevel::High,
                 DecisionLevel::Mandatory})
    CHECK(parse_decision_level(to_string(l)) == l);
  CHECK(parse_sensor("lidar") == SensorKind::LIDAR);
  CHECK(parse_response("agree") == PilotResponse::Agree);
  CHECK_FALSE(parse_sensor("radar"));
}

TEST_CASE("sensor order breaks ties GPS < LIDAR < IMU") {
  CHECK(SensorKind::GPS < SensorKind::LIDAR);
  CHECK(SensorKind::LIDAR < SensorKind::IMU);
  CHECK(kAllSensors.size() == 3);
}

TEST_CASE("learnable levels") {
  CHECK(learnable_level(ErrorRange::Level1) == AlertLevel::Low);
  CHECK(learnable_level(ErrorRange::Level2) == AlertLevel::High);
  CHECK_FALSE(learnable_level(ErrorRange::Normal));
  CHECK_FALSE(learnable_level(ErrorRange::Safety));
  CHECK_FALSE(learnable_level(DecisionLevel::Mandatory));
  CHECK_FALSE(learnable_level(DecisionLevel::Suppressed));
  CHECK(to_decision_level(AlertLevel::High) == DecisionLevel::High);
}

TEST_CASE("QTable has exactly twelve distinct keys") {
  std::set<std::string> names;
  for (std::size_t i = 0; i < QTable::kSize; ++i) {
    const QKey k = QTable::key_at(i);
    CHECK(QTable::slot(k) == i);
    names.insert(to_string(k));
    CHECK(parse_qkey(to_string(k)) == k);
  }
  CHECK(names.size() == 12);
  CHECK(names.count("GPS.Low.Warn") == 1);
  CHECK(names.count("IMU.High.DoNotWarn") == 1);
  CHECK_FALSE(parse_qkey("GPS.Medium.Warn"));
  CHECK_FALSE(parse_qkey("GPS.Low"));
}

TEST_CASE("QTable starts at zero and writes one entry") {
  QTable q;
  for (double v : q.values()) CHECK(v == 0.0);
  q[{SensorKind::LIDAR, AlertLevel::High, AlertAction::Warn}] = 0.5;
  CHECK(q.value(SensorKind::LIDAR, AlertLevel::High, AlertAction::Warn) == 0.5);
  int nonzero = 0;
  for (double v : q.values()) nonzero += v != 0.0;
  CHECK(nonzero == 1);
}

TEST_CASE("threshold validity") {
  CHECK(RangeThresholds{3, 9, 15}.valid());
  CHECK_FALSE(RangeThresholds{9, 9, 15}.valid());
  CHECK_FALSE(RangeThresholds{0, 9, 15}.valid());
  CHECK_FALSE(RangeThresholds{3, 16, 15}.valid());
}
