#pragma once

// Live runs: the engine ticks in real time while a WebSocket endpoint
// broadcasts every trace event to connected consoles and queues their
// responses and commands for the engine.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "leias/config.hpp"

namespace leias {

struct ClientMessage {
  enum class Type : std::uint8_t { PilotResponse, InitiateLanding, Stop };
  Type type = Type::Stop;
  PilotResponse response = PilotResponse::Neutral;  // Agree or Disagree for PilotResponse

  friend bool operator==(const ClientMessage&, const ClientMessage&) = default;
};

// {"type":"pilot_response","response":"agree"|"disagree"} or
// {"type":"command","name":"initiate_landing"|"stop"}. Anything else throws
// ProtocolError.
ClientMessage parse_client_message(std::string_view text);

// Reply sent to a client whose message was rejected.
std::string error_message(std::string_view reason);

struct InteractiveOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  double speed = 1.0;      // multiplies tick_hz
  std::optional<Tick> max_ticks;  // defaults to the config's
  QTable initial_q;
  std::ostream* trace_out = nullptr;  // JSONL trace, header first
  // Hold tick 0 until the first client has connected.
  bool wait_for_client = false;
};

class InteractiveServer {
 public:
  // Binds the endpoint. Throws ConfigError unless the pilot model is
  // console, PortBindError if the address cannot be bound.
  InteractiveServer(const ScenarioConfig& config, InteractiveOptions options);
  ~InteractiveServer();
  InteractiveServer(const InteractiveServer&) = delete;
  InteractiveServer& operator=(const InteractiveServer&) = delete;

  std::uint16_t port() const noexcept;

  // Runs the engine on the calling thread until the route completes, the
  // tick limit is reached, or a client sends stop or initiate_landing.
  // Returns the exit status.
  int run();

  // Thread-safe; ends run() after the current tick.
  void request_stop();

  struct Impl;  // opaque

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace leias
