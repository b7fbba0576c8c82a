// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "leias/harness.hpp"
#include "leias/monitor.hpp"
#include "leias/pilot_models.hpp"
#include "leias/rl_agent.hpp"
#include "leias/sweep.hpp"
#include "leias/trace.hpp"

using namespace leias;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::uint64_t> twenty_seeds() {
  std::vector<std::uint64_t> s(20);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

std::vector<TraceEvent> of_kind(const Trace& t, EventKind k) {
  std::vector<TraceEvent> out;
  for (const auto& e : t)
    if (e.kind == k) out.push_back(e);
  return out;
}

// --- 1 ----------------------------------------------------------------------
Outcome hard_rules() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto tally = sweep::hard_rules(RangeThresholds{}, 10000, 2024);
  const double dt = seconds_since(t0);
  o.require(tally.safety_cases == 10000 && tally.normal_cases == 10000, "wrong case count");
  o.require(tally.safety_warn == tally.safety_cases, "Safety case without Warn");
  o.require(tally.normal_no_warn == tally.normal_cases, "Normal case with Warn");
  o.require(dt < 5.0, "took " + std::to_string(dt) + " s");
  if (o.ok) o.detail = "20000 cases in " + std::to_string(dt) + " s";
  return o;
}

// --- 2 and 3 ----------------------------------------------------------------
Outcome convergence(const ScenarioConfig& base,
                    const std::function<AlertAction(SensorKind, AlertLevel)>& preferred,
                    bool need_gap) {
  Outcome o;
  const auto seeds = twenty_seeds();
  const auto t0 = Clock::now();
  const auto runs = sweep::training(base, 500, seeds);
  const double dt = seconds_since(t0);
  int matching = 0;
  for (const auto& r : runs) {
    bool match = true;
    for (auto s : kAllSensors) {
      for (auto l : {AlertLevel::Low, AlertLevel::High}) {
        const AlertAction want = preferred(s, l);
        const AlertAction other = want == AlertAction::Warn ? AlertAction::DoNotWarn : AlertAction::Warn;
        if (greedy_action(r.q, s, l) != want) match = false;
        if (need_gap && !(r.q.value(s, l, want) - r.q.value(s, l, other) > 0.5)) match = false;
      }
    }
    matching += match;
  }
  o.require(matching >= 18, std::to_string(matching) + "/20 seeds match");
  o.require(dt < 30.0, "took " + std::to_string(dt) + " s");
  if (o.ok) o.detail = std::to_string(matching) + "/20 seeds match, " + std::to_string(dt) + " s";
  return o;
}

Outcome reference_convergence() {
  const PreferenceTable prefs = PreferenceTable::reference_pilot();
  return convergence(ScenarioConfig{}, [&](SensorKind s, AlertLevel l) { return prefs(s, l); }, true);
}

Outcome threshold_convergence() {
  ScenarioConfig c;
  c.pilot_model.kind = pilot::Threshold{9.0};
  return convergence(
      c, [](SensorKind, AlertLevel l) { return l == AlertLevel::High ? AlertAction::Warn : AlertAction::DoNotWarn; },
      false);
}

// --- 4 ----------------------------------------------------------------------
Outcome testing_ramp() {
  Outcome o;
  ScenarioConfig c;
  c.seed = 42;
  const auto t = run_testing(c, run_training(c, 500).q);
  const auto& gps = t.sensors[index_of(SensorKind::GPS)];
  const auto& imu = t.sensors[index_of(SensorKind::IMU)];
  o.require(gps.first_level1_tick && gps.first_alert_tick, "GPS never alerted");
  if (o.ok)
    o.require(*gps.first_alert_tick >= *gps.first_level1_tick &&
                  *gps.first_alert_tick <= *gps.first_level1_tick + 1,
              "GPS first alert at tick " + std::to_string(*gps.first_alert_tick) +
                  ", Level1 entered at " + std::to_string(*gps.first_level1_tick));
  o.require(imu.first_safety_tick && imu.first_alert_tick == imu.first_safety_tick,
            "IMU first alert not at the first Safety tick");
  o.require(imu.first_alert_level == DecisionLevel::Mandatory, "IMU first alert not Mandatory");
  for (const auto& s : t.sensors)
    o.require(s.mandatory_at_safety, std::string(to_string(s.sensor)) + " missed a Safety tick");
  if (o.ok)
    o.detail = "GPS alert at " + std::to_string(*gps.first_alert_tick) + ", IMU alert at " +
               std::to_string(*imu.first_alert_tick);
  return o;
}

// --- 5 ----------------------------------------------------------------------
ScenarioConfig gps_fault(PilotKind pilot) {
  ScenarioConfig c;
  c.seed = 5;
  c.waypoints = {{100, 0}};
  c.max_ticks = 40;
  c.pilot_model.kind = pilot;
  c.error_schedule[SensorKind::GPS] = schedule::Fixed{20.0, 3};
  return c;
}

Outcome timeout_switch() {
  Outcome o;
  const auto silent = run_simulation(gps_fault(pilot::Silent{}));
  const auto opened = of_kind(silent.trace, EventKind::AlertOpened);
  const auto switched = of_kind(silent.trace, EventKind::SensorSwitched);
  o.require(opened.size() == 1, "expected one alert");
  o.require(switched.size() == 1, "expected one switch");
  if (!o.ok) return o;
  const Tick k = opened[0].tick;
  o.require(switched[0].tick == k + 5, "switch at " + std::to_string(switched[0].tick) +
                                           ", alert at " + std::to_string(k));
  std::string recommended;
  for (const auto& e : of_kind(silent.trace, EventKind::StateSnapshot))
    if (e.tick == k) recommended = e.payload["authority"]["recommended"];
  o.require(switched[0].payload["from"] == "GPS" && switched[0].payload["to"] == recommended &&
                switched[0].payload["cause"] == "timeout",
            "switch payload " + switched[0].payload.dump());

  SimulationOptions opts;
  opts.script = {{k + 1, PilotResponse::Disagree}};
  const auto contested = run_simulation(gps_fault(pilot::Console{}), opts);
  o.require(of_kind(contested.trace, EventKind::SensorSwitched).empty(), "switch after Disagree");
  if (o.ok) o.detail = "alert at " + std::to_string(k) + ", timeout switch at " + std::to_string(k + 5);
  return o;
}

// --- 6 ----------------------------------------------------------------------
Outcome counterexample() {
  Outcome o;
  std::ifstream in(fs::path(LEIAS_FIXTURES) / "two_step_counterexample.jsonl");
  const TraceFile f = read_trace(in);
  const auto v = check_trace(f.events);
  int l2 = 0, g3 = 0, other = 0;
  const Violation* l2v = nullptr;
  for (const auto& x : v) {
    if (x.req == RequirementId::L2UnreliableActive) {
      ++l2;
      l2v = &x;
    } else if (x.req == RequirementId::G3ResponseExpected) {
      ++g3;
    } else {
      ++other;
    }
  }
  o.require(l2 == 1 && l2v && l2v->tick == 2, "expected exactly one L2 at tick 2");
  o.require(g3 == 1 && other == 0, "expected exactly one G3 and nothing else");
  if (l2v) {
    const Trace prefix = extract_counterexample(f.events, *l2v);
    std::vector<Tick> ticks;
    for (const auto& e : prefix)
      if (e.kind == EventKind::StateSnapshot) ticks.push_back(e.tick);
    o.require(ticks == std::vector<Tick>{1, 2}, "prefix does not span ticks 1-2");
  }

  ScenarioConfig c = gps_fault(pilot::Silent{});
  c.autonomous_switching = false;
  const auto r = run_simulation(c);
  const auto opened = of_kind(r.trace, EventKind::AlertOpened);
  o.require(!opened.empty(), "engine run opened no alert");
  if (!opened.empty()) {
    const Tick k = opened[0].tick;
    bool found = false;
    for (const auto& x : check_trace(r.trace))
      found |= x.req == RequirementId::L2UnreliableActive && x.tick >= k && x.tick <= k + 2;
    o.require(found, "no L2 within 2 ticks of the alert at " + std::to_string(k));
  }
  if (o.ok) o.detail = "fixture L2@2 + G3; engine run reproduces L2";
  return o;
}

// --- 7 ----------------------------------------------------------------------
Outcome nominal_emptiness() {
  Outcome o;
  const ScenarioConfig base = load_config(fs::path(LEIAS_SCENARIOS) / "nominal.json");
  const auto seeds = twenty_seeds();
  const auto t0 = Clock::now();
  const auto runs = sweep::verification(base, seeds);
  const double dt = seconds_since(t0);
  std::size_t alerts = 0;
  for (const auto& r : runs) {
    alerts += r.alerts_opened;
    o.require(r.violations.empty(), "seed " + std::to_string(r.seed) + " has " +
                                        std::to_string(r.violations.size()) + " violations");
  }
  o.require(dt < 20.0, "took " + std::to_string(dt) + " s");
  if (o.ok) o.detail = "20 runs, " + std::to_string(alerts) + " alerts, 0 violations, " + std::to_string(dt) + " s";
  return o;
}

// --- 8 ----------------------------------------------------------------------
long double oracle_warn(long double qw, long double qn, long double tau) {
  const long double ew = std::exp(qw / tau), en = std::exp(qn / tau);
  return ew / (ew + en);
}

Outcome softmax() {
  Outcome o;
  const double p = warn_probability(1.0, -1.0, 1.0);
  o.require(std::fabs(p - 0.8807970779723) < 1e-9, "P(Warn) = " + std::to_string(p));
  o.require(std::fabs(p - static_cast<double>(oracle_warn(1, -1, 1))) < 1e-9, "oracle mismatch");

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> q(-5, 5), tau(0.05, 10), shift(-100, 100);
  for (int i = 0; i < 1000 && o.ok; ++i) {
    const double a = q(gen), b = q(gen), t = tau(gen), c = shift(gen);
    const double pw = warn_probability(a, b, t), pn = warn_probability(b, a, t);
    o.require(std::fabs(pw + pn - 1.0) < 1e-12, "normalization fails at input " + std::to_string(i));
    o.require(std::fabs(warn_probability(a + c, b + c, t) - pw) < 1e-12,
              "shift invariance fails at input " + std::to_string(i));
    o.require(std::fabs(pw - static_cast<double>(oracle_warn(a, b, t))) < 1e-9,
              "oracle mismatch at input " + std::to_string(i));
  }
  if (o.ok) o.detail = "P(Warn) = " + std::to_string(p);
  return o;
}

// --- 9 ----------------------------------------------------------------------
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + LEIAS_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("leias_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string scenario = (fs::path(LEIAS_SCENARIOS) / "training_reference.json").string();
  for (const char* run : {"a", "b"}) {
    const int rc = run_cli("train --scenario \"" + scenario + "\" --seed 42 --trials 500 --out \"" +
                           (root / run).string() + "\"");
    o.require(rc == 0, std::string("train run ") + run + " exited " + std::to_string(rc));
  }
  for (const char* file : {"trace.jsonl", "curves.csv", "qtable.json"}) {
    const auto a = slurp(root / "a" / file), b = slurp(root / "b" / file);
    o.require(!a.empty() && a == b, std::string(file) + " differs between runs");
  }
  const int rc = run_cli("replay --trace \"" + (root / "a" / "trace.jsonl").string() + "\"");
  o.require(rc == 0, "replay exited " + std::to_string(rc));
  fs::remove_all(root);
  if (o.ok) o.detail = "trace, curves and Q table byte-identical; replay exit 0";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {1, "hard alert rules", hard_rules},
      {2, "reference pilot convergence", reference_convergence},
      {3, "threshold pilot convergence", threshold_convergence},
      {4, "testing ramp", testing_ramp},
      {5, "timeout switch", timeout_switch},
      {6, "counterexample reproduction", counterexample},
      {7, "nominal verification emptiness", nominal_emptiness},
      {8, "softmax correctness", softmax},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
