#include "doctest.h"
#include "leias/errors.hpp"
#include "leias/harness.hpp"
#include "leias/interactive.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <sstream>
#include <thread>

using namespace leias;
using nlohmann::json;
namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

ScenarioConfig console_config() {
  ScenarioConfig c;
  c.seed = 3;
  c.waypoints = {{200, 0}};
  c.max_ticks = 200;
  c.pilot_model.kind = pilot::Console{};
  c.error_schedule[SensorKind::GPS] = schedule::Fixed{20, 3};
  return c;
}

class Client {
 public:
  explicit Client(std::uint16_t port) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/");
  }
  json read() {
    beast::flat_buffer buf;
    ws_.read(buf);
    return json::parse(beast::buffers_to_string(buf.data()));
  }
  // Reads until a message satisfies pred; returns it.
  template <class Pred>
  json read_until(Pred pred) {
    for (;;) {
      json j = read();
      seen_.push_back(j);
      if (pred(j)) return j;
    }
  }
  void send(const json& j) { ws_.write(net::buffer(j.dump())); }
  void send_raw(const std::string& s) { ws_.write(net::buffer(s)); }
  // Drains until the server closes the connection.
  void drain() {
    try {
      for (;;) seen_.push_back(read());
    } catch (const beast::system_error&) {
    }
  }
  const std::vector<json>& seen() const { return seen_; }

 private:
  net::io_context ioc_;
  websocket::stream<tcp::socket> ws_;
  std::vector<json> seen_;
};

bool is_kind(const json& j, const char* kind) { return j.contains("kind") && j["kind"] == kind; }

}  // namespace

TEST_CASE("client message parsing") {
  CHECK(parse_client_message(R"({"type":"pilot_response","response":"agree"})") ==
        ClientMessage{ClientMessage::Type::PilotResponse, PilotResponse::Agree});
  CHECK(parse_client_message(R"({"type":"pilot_response","response":"disagree"})").response ==
        PilotResponse::Disagree);
  CHECK(parse_client_message(R"({"type":"command","name":"stop"})").type == ClientMessage::Type::Stop);
  CHECK(parse_client_message(R"({"type":"command","name":"initiate_landing"})").type ==
        ClientMessage::Type::InitiateLanding);
  for (const char* bad : {"", "not json", "[]", R"({"type":1})", R"({"type":"hello"})",
                          R"({"type":"pilot_response","response":"neutral"})",
                          R"({"type":"pilot_response"})", R"({"type":"command","name":"eject"})"})
    CHECK_THROWS_AS(parse_client_message(bad), ProtocolError);
  CHECK(json::parse(error_message("nope")) == json{{"type", "error"}, {"message", "nope"}});
}

TEST_CASE("interactive runs need the console pilot") {
  ScenarioConfig c = console_config();
  c.pilot_model.kind = pilot::Table{};
  CHECK_THROWS_AS(InteractiveServer(c, {}), ConfigError);
}

TEST_CASE("port already in use") {
  InteractiveServer first(console_config(), {});
  InteractiveOptions opts;
  opts.port = first.port();
  CHECK_THROWS_AS(InteractiveServer(console_config(), opts), PortBindError);
}

TEST_CASE("no client: the run completes with no responses") {
  ScenarioConfig c = console_config();
  c.waypoints = {{12, 0}};
  std::stringstream trace;
  InteractiveOptions opts;
  opts.speed = 500;
  opts.trace_out = &trace;
  InteractiveServer server(c, opts);
  CHECK(server.run() == 0);
  const TraceFile f = read_trace(trace);
  CHECK(f.events.back().tick == 11);  // route of 12 units at 1 unit per tick
  for (const auto& e : f.events) CHECK(e.kind != EventKind::PilotResponded);
  CHECK_NOTHROW(replay(f));
}

TEST_CASE("two clients: shared stream, first response wins, stop ends the run") {
  std::stringstream trace;
  InteractiveOptions opts;
  opts.speed = 20;
  opts.wait_for_client = true;
  opts.trace_out = &trace;
  InteractiveServer server(console_config(), opts);
  int status = -1;
  std::thread engine([&] { status = server.run(); });

  Client a(server.port());
  Client b(server.port());

  a.send_raw("{oops");
  const json err = a.read_until([](const json& j) { return j.contains("type") && j["type"] == "error"; });
  CHECK(err["message"].get<std::string>().find("JSON") != std::string::npos);

  const json opened = a.read_until([](const json& j) { return is_kind(j, "AlertOpened"); });
  CHECK(opened["payload"]["sensor"] == "GPS");
  const Tick k = opened["tick"];
  a.send({{"type", "pilot_response"}, {"response", "agree"}});
  b.read_until([](const json& j) { return is_kind(j, "AlertOpened"); });
  b.send({{"type", "pilot_response"}, {"response", "disagree"}});

  const json responded = a.read_until([](const json& j) { return is_kind(j, "PilotResponded"); });
  CHECK(responded["payload"]["response"] == "Agree");
  CHECK(responded["tick"].get<Tick>() <= k + 2);
  const json switched = a.read_until([](const json& j) { return is_kind(j, "SensorSwitched"); });
  CHECK(switched["tick"] == responded["tick"]);
  CHECK(switched["payload"]["cause"] == "agree");

  b.send({{"type", "command"}, {"name", "stop"}});
  a.drain();
  b.drain();
  engine.join();
  CHECK(status == 0);

  // Both clients saw the same event stream from the first AlertOpened on.
  auto events_from_alert = [](const std::vector<json>& seen) {
    std::vector<json> out;
    bool on = false;
    for (const auto& j : seen) {
      if (is_kind(j, "AlertOpened")) on = true;
      if (on && j.contains("kind")) out.push_back(j);
    }
    return out;
  };
  const auto ea = events_from_alert(a.seen()), eb = events_from_alert(b.seen());
  CHECK(!ea.empty());
  CHECK(ea == eb);

  const TraceFile f = read_trace(trace);
  REQUIRE(f.header);
  CHECK(f.header->mode == RunMode::Interactive);
  // the second response found no open alert and never reached the trace
  int responses = 0;
  for (const auto& e : f.events) responses += e.kind == EventKind::PilotResponded;
  CHECK(responses == 1);
  // broadcast lines are the trace lines verbatim
  CHECK(f.lines.size() == f.events.size() + 1);
  CHECK_NOTHROW(replay(f));
}
