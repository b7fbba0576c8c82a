#include "doctest.h"
#include "leias/random.hpp"
#include "leias/reliability.hpp"

#include <array>
#include <cmath>

using namespace leias;

namespace {

constexpr RangeThresholds kT{3, 9, 15};

SensorReadings readings(Position g, Position l, Position i) {
  return {SensorReading{SensorKind::GPS, g, 0}, SensorReading{SensorKind::LIDAR, l, 0},
          SensorReading{SensorKind::IMU, i, 0}};
}

// Hand oracle for the odd-one-out rule: S is implicated iff both of its
// discrepancies are above Normal and the remaining pair is Normal.
std::optional<SensorKind> odd_one_out(double gl, double gi, double li, double t1) {
  const bool GL = gl >= t1, GI = gi >= t1, LI = li >= t1;
  if (GL && GI && !LI) return SensorKind::GPS;
  if (GL && LI && !GI) return SensorKind::LIDAR;
  if (GI && LI && !GL) return SensorKind::IMU;
  return std::nullopt;
}

ErrorRange rank(ErrorRange r) { return r; }

}  // namespace

TEST_CASE("pairwise discrepancies") {
  CHECK(pairwise_discrepancies(readings({0, 0}, {0, 0}, {0, 0})) == DiscrepancyMatrix{0, 0, 0});
  CHECK(pairwise_discrepancies(readings({0, 0}, {3, 4}, {0, 0})) == DiscrepancyMatrix{5, 0, 5});
  CHECK(pairwise_discrepancies(readings({1, 1}, {1, 1}, {1, 2})) == DiscrepancyMatrix{0, 1, 1});
  const DiscrepancyMatrix m{1, 2, 3};
  CHECK(m.between(SensorKind::LIDAR, SensorKind::GPS) == 1);
  CHECK(m.between(SensorKind::IMU, SensorKind::GPS) == 2);
  CHECK(m.between(SensorKind::IMU, SensorKind::LIDAR) == 3);
}

TEST_CASE("classify uses half-open bands") {
  CHECK(classify(0.0, kT) == ErrorRange::Normal);
  CHECK(classify(2.999, kT) == ErrorRange::Normal);
  CHECK(classify(3.0, kT) == ErrorRange::Level1);
  CHECK(classify(8.999, kT) == ErrorRange::Level1);
  CHECK(classify(9.0, kT) == ErrorRange::Level2);
  CHECK(classify(15.0, kT) == ErrorRange::Safety);
  CHECK(classify(1e9, kT) == ErrorRange::Safety);
}

TEST_CASE("GPS odd one out") {
  const auto a = assess({10, 10, 0.5}, kT);
  CHECK(a.implicated() == SensorKind::GPS);
  CHECK_FALSE(a.ambiguous);
  const auto& g = a[SensorKind::GPS];
  CHECK(g.implicated);
  CHECK(g.error_value == doctest::Approx(10.0));
  CHECK(g.range == ErrorRange::Level2);
  CHECK_FALSE(g.reliable);
  CHECK(a[SensorKind::LIDAR].reliable);
  CHECK(a[SensorKind::IMU].reliable);
  CHECK(a[SensorKind::LIDAR].error_value == 0.0);
}

TEST_CASE("LIDAR and IMU odd one out") {
  const auto l = assess({10, 0.5, 10}, kT);
  CHECK(l.implicated() == SensorKind::LIDAR);
  CHECK(l[SensorKind::LIDAR].error_value == doctest::Approx(10.0));
  const auto i = assess({0.5, 16, 18}, kT);
  CHECK(i.implicated() == SensorKind::IMU);
  CHECK(i[SensorKind::IMU].error_value == doctest::Approx(17.0));
  CHECK(i[SensorKind::IMU].range == ErrorRange::Safety);
  CHECK_FALSE(i[SensorKind::IMU].reliable);
}

TEST_CASE("no discrepancy: nothing implicated") {
  const auto a = assess({0, 0, 0}, kT);
  CHECK_FALSE(a.implicated());
  CHECK_FALSE(a.ambiguous);
  for (const auto& s : a.sensors) {
    CHECK(s.reliable);
    CHECK(s.range == ErrorRange::Normal);
  }
}

TEST_CASE("small discrepancies without implication report their max") {
  const auto a = assess({1, 2, 0.5}, kT);
  CHECK_FALSE(a.implicated());
  CHECK(a[SensorKind::GPS].error_value == 2.0);
  CHECK(a[SensorKind::LIDAR].error_value == 1.0);
  CHECK(a[SensorKind::IMU].error_value == 2.0);
}

TEST_CASE("multi-fault pattern is ambiguous") {
  const auto a = assess({10, 10, 10}, kT);
  CHECK(a.ambiguous);
  CHECK_FALSE(a.implicated());
  for (const auto& s : a.sensors) CHECK(s.reliable);
  const auto b = assess({10, 0.1, 0.2}, kT);
  CHECK(b.ambiguous);
}

TEST_CASE("property: G1, G2, odd-one-out oracle, at most one implicated") {
  RandomStream r(3, "matrices");
  for (int i = 0; i < 20000; ++i) {
    const double scale = r.uniform01() < 0.5 ? 5.0 : 25.0;
    const DiscrepancyMatrix m{r.uniform(0, scale), r.uniform(0, scale), r.uniform(0, scale)};
    const auto a = assess(m, kT);
    int implicated = 0;
    for (const auto& s : a.sensors) {
      if (s.range == ErrorRange::Normal) CHECK(s.reliable);
      if (s.implicated && s.range == ErrorRange::Safety) CHECK_FALSE(s.reliable);
      if (!s.implicated) CHECK(s.reliable);
      implicated += s.implicated;
    }
    CHECK(implicated <= 1);
    CHECK(a.implicated() == odd_one_out(m.gps_lidar, m.gps_imu, m.lidar_imu, kT.t1));
  }
}

TEST_CASE("property: permutation equivariance") {
  RandomStream r(4, "perm");
  // Relabel GPS <-> IMU: gps_lidar <-> lidar_imu, gps_imu fixed.
  for (int i = 0; i < 5000; ++i) {
    const DiscrepancyMatrix m{r.uniform(0, 20), r.uniform(0, 20), r.uniform(0, 20)};
    const DiscrepancyMatrix p{m.lidar_imu, m.gps_imu, m.gps_lidar};
    const auto a = assess(m, kT), b = assess(p, kT);
    auto same = [](SensorAssessment x, const SensorAssessment& y) {
      x.sensor = y.sensor;
      return x == y;
    };
    CHECK(same(a[SensorKind::GPS], b[SensorKind::IMU]));
    CHECK(same(a[SensorKind::IMU], b[SensorKind::GPS]));
    CHECK(same(a[SensorKind::LIDAR], b[SensorKind::LIDAR]));
    CHECK(a.ambiguous == b.ambiguous);
  }
}

TEST_CASE("property: classify is monotone and total") {
  RandomStream r(5, "mono");
  for (int i = 0; i < 10000; ++i) {
    const double t1 = r.uniform(0.1, 5), t2 = t1 + r.uniform(0.1, 5), t3 = t2 + r.uniform(0.1, 5);
    const RangeThresholds t{t1, t2, t3};
    double a = r.uniform(0, 20), b = r.uniform(0, 20);
    if (a > b) std::swap(a, b);
    CHECK(rank(classify(a, t)) <= rank(classify(b, t)));
  }
}

TEST_CASE("an injected error exactly on a band edge lands in that band") {
  RandomStream r(6, "edge");
  for (int i = 0; i < 2000; ++i) {
    const double angle = r.uniform(0, 6.283185307179586);
    for (double e : {3.0, 9.0, 15.0}) {
      const Position g{e * std::cos(angle), e * std::sin(angle)};
      const auto a = assess(pairwise_discrepancies(readings(g, {0, 0}, {0, 0})), kT);
      CHECK(a[SensorKind::GPS].range == classify(e, kT));
    }
  }
}
