// leias: train, test, run, simulate, verify and replay.
//
// Exit status: 0 success; 1 violations found, divergence, or failed
// testing trials; 2 malformed input or bad configuration; 3 port bind
// failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "leias/config.hpp"
#include "leias/errors.hpp"
#include "leias/harness.hpp"
#include "leias/interactive.hpp"
#include "leias/monitor.hpp"
#include "leias/trace.hpp"

namespace fs = std::filesystem;
using namespace leias;
using nlohmann::json;

namespace {

constexpr int kExitFound = 1;
constexpr int kExitInput = 2;
constexpr int kExitBind = 3;

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string qtable;
  std::string out = ".";
};

ScenarioConfig load(const Common& c) {
  ScenarioConfig config = load_config(c.scenario);
  if (c.seed) config.seed = *c.seed;
  if (!c.policy.empty()) config.selection_policy = parse_policy_flag(c.policy);
  return validate_config(config);
}

QTable initial_q(const Common& c) { return c.qtable.empty() ? QTable{} : read_qtable(c.qtable); }

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

int cmd_train(const Common& c, std::int64_t trials) {
  const ScenarioConfig config = load(c);
  const QTable q0 = initial_q(c);
  const TrainingResult r = run_training(config, trials, q0);
  const fs::path dir = out_dir(c);

  write_lines(dir / "trace.jsonl",
              render_trace(make_header(config, RunMode::Train, trials, q0), r.trace));
  write_qtable(dir / "qtable.json", r.q);
  write_text(dir / "curves.csv", curve_csv(r.curve));
  std::vector<std::string> records;
  for (const auto& rec : r.records) records.push_back(to_json(rec).dump());
  write_lines(dir / "trials.jsonl", records);

  const auto summary = policy_summary(r.q);
  std::cout << "trained " << trials << " trials, seed " << config.seed << "\n";
  for (auto s : kAllSensors) {
    std::cout << "  " << to_string(s);
    for (auto l : kAllLevels) {
      const auto g = greedy_action(r.q, s, l);
      std::cout << "  " << to_string(l) << "=" << (g ? std::string(to_string(*g)) : "undecided")
                << " (" << to_string(summary.at(s, l).color) << ")";
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_test(const Common& c) {
  const ScenarioConfig config = load(c);
  const QTable q = initial_q(c);
  const TestingResult r = run_testing(config, q);
  const fs::path dir = out_dir(c);

  json report = json::array();
  std::vector<std::string> records;
  for (const auto& s : r.sensors) {
    auto opt = [](const std::optional<Tick>& t) { return t ? json(*t) : json(nullptr); };
    report.push_back({{"sensor", to_string(s.sensor)},
                      {"first_alert_tick", opt(s.first_alert_tick)},
                      {"first_alert_error", s.first_alert_tick ? json(s.first_alert_error) : json(nullptr)},
                      {"first_alert_level", s.first_alert_tick ? json(to_string(s.first_alert_level)) : json(nullptr)},
                      {"first_level1_tick", opt(s.first_level1_tick)},
                      {"first_safety_tick", opt(s.first_safety_tick)},
                      {"mandatory_at_safety", s.mandatory_at_safety}});
    for (const auto& rec : s.records) records.push_back(to_json(rec).dump());
    std::cout << to_string(s.sensor) << ": first alert ";
    if (s.first_alert_tick)
      std::cout << "at tick " << *s.first_alert_tick << " (error " << s.first_alert_error << ", "
                << to_string(s.first_alert_level) << ")";
    else
      std::cout << "never";
    std::cout << ", mandatory at safety " << (s.mandatory_at_safety ? "yes" : "NO") << "\n";
  }
  write_text(dir / "test_report.json", report.dump(2) + "\n");
  write_lines(dir / "test_trials.jsonl", records);
  return r.passed() ? 0 : kExitFound;
}

int cmd_simulate(const Common& c, std::optional<Tick> ticks) {
  const ScenarioConfig config = load(c);
  const QTable q0 = initial_q(c);
  SimulationOptions opts;
  opts.initial_q = q0;
  opts.ticks = ticks;
  const SimulationResult r = run_simulation(config, opts);
  const fs::path dir = out_dir(c);
  write_lines(dir / "trace.jsonl",
              render_trace(make_header(config, RunMode::Simulate, 0, q0), r.trace));
  std::cout << "simulated " << r.final_state.tick << " ticks, active sensor "
            << to_string(r.final_state.authority.active) << "\n";
  return 0;
}

int cmd_run(const Common& c, std::uint16_t port, const std::string& address, double speed,
            std::optional<Tick> max_ticks, bool wait) {
  const ScenarioConfig config = load(c);
  InteractiveOptions opts;
  opts.address = address;
  opts.port = port;
  opts.speed = speed;
  opts.max_ticks = max_ticks;
  opts.initial_q = initial_q(c);
  opts.wait_for_client = wait;

  std::ofstream trace;
  if (!c.out.empty()) {
    const fs::path path = out_dir(c) / "trace.jsonl";
    trace.open(path, std::ios::binary | std::ios::trunc);
    if (!trace) throw Error("cannot write " + path.string());
    opts.trace_out = &trace;
  }
  InteractiveServer server(config, std::move(opts));
  std::cout << "listening on ws://" << address << ":" << server.port() << std::endl;
  return server.run();
}

int cmd_verify(const std::string& trace_path, const std::string& report_path) {
  const TraceFile file = read_trace(fs::path(trace_path));
  const auto violations = check_trace(file.events);
  std::string lines;
  for (const auto& v : violations) lines += to_json(v).dump() + "\n";
  if (report_path.empty())
    std::cout << lines;
  else
    write_text(report_path, lines);
  std::cerr << violations.size() << " violation(s)\n";
  return violations.empty() ? 0 : kExitFound;
}

int cmd_replay(const std::string& trace_path) {
  replay(read_trace(fs::path(trace_path)));
  std::cout << "identical\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning-enabled alerting simulator"};
  app.require_subcommand(1);

  Common common;
  auto add_scenario = [&](CLI::App* sub) {
    sub->add_option("--scenario", common.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "overrides the scenario seed");
  };

  std::int64_t trials = 500;
  auto* train = app.add_subcommand("train", "learning trials with a scripted pilot");
  add_scenario(train);
  train->add_option("--trials", trials, "number of trials")->check(CLI::NonNegativeNumber);
  train->add_option("--policy", common.policy, "anneal | fixed:<tau> | fixed:high | fixed:low");
  train->add_option("--qtable", common.qtable, "starting QTable")->check(CLI::ExistingFile);
  train->add_option("--out", common.out, "output directory");

  auto* test = app.add_subcommand("test", "testing trials: error ramps with learning frozen");
  add_scenario(test);
  test->add_option("--qtable", common.qtable, "trained QTable")->required()->check(CLI::ExistingFile);
  test->add_option("--policy", common.policy, "selection policy the table was trained with");
  test->add_option("--out", common.out, "output directory");

  std::optional<Tick> ticks;
  auto* simulate = app.add_subcommand("simulate", "scripted engine run");
  add_scenario(simulate);
  simulate->add_option("--qtable", common.qtable, "starting QTable")->check(CLI::ExistingFile);
  simulate->add_option("--ticks", ticks, "exact tick count (ignores route completion)");
  simulate->add_option("--out", common.out, "output directory");

  std::uint16_t port = 8765;
  std::string address = "127.0.0.1";
  double speed = 1.0;
  std::optional<Tick> max_ticks;
  bool wait = false;
  auto* run = app.add_subcommand("run", "live run with the pilot console");
  add_scenario(run);
  run->add_option("--port", port, "websocket port (0 picks one)");
  run->add_option("--address", address, "listen address");
  run->add_option("--qtable", common.qtable, "trained QTable")->check(CLI::ExistingFile);
  run->add_option("--speed", speed, "tick rate multiplier")->check(CLI::PositiveNumber);
  run->add_option("--max-ticks", max_ticks, "tick limit");
  run->add_flag("--wait-for-client", wait, "hold the first tick until a console connects");
  run->add_option("--out", common.out, "directory for trace.jsonl");

  std::string trace_path, report_path;
  auto* verify = app.add_subcommand("verify", "check a trace against the guarantees");
  verify->add_option("--trace", trace_path, "JSONL trace")->required()->check(CLI::ExistingFile);
  verify->add_option("--report", report_path, "write violations here instead of stdout");

  auto* rep = app.add_subcommand("replay", "regenerate a trace and compare");
  rep->add_option("--trace", trace_path, "JSONL trace")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version exit 0; every usage error is bad input
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmd_train(common, trials);
    if (*test) return cmd_test(common);
    if (*simulate) return cmd_simulate(common, ticks);
    if (*run) return cmd_run(common, port, address, speed, max_ticks, wait);
    if (*verify) return cmd_verify(trace_path, report_path);
    if (*rep) return cmd_replay(trace_path);
  } catch (const DivergenceError& e) {
    std::cerr << "divergence";
    if (e.tick() >= 0) std::cerr << " at tick " << e.tick();
    std::cerr << ": " << e.what() << "\n";
    return kExitFound;
  } catch (const PortBindError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBind;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
