#include "leias/interactive.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "leias/autonomy.hpp"
#include "leias/errors.hpp"
#include "leias/flight_sim.hpp"
#include "leias/harness.hpp"
#include "leias/trace.hpp"

namespace leias {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using nlohmann::json;

ClientMessage parse_client_message(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw ProtocolError("message is not valid JSON");
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ProtocolError("message needs a string \"type\"");
  const auto type = j["type"].get<std::string>();
  if (type == "pilot_response") {
    if (!j.contains("response") || !j["response"].is_string())
      throw ProtocolError("pilot_response needs a string \"response\"");
    const auto r = j["response"].get<std::string>();
    if (r == "agree") return {ClientMessage::Type::PilotResponse, PilotResponse::Agree};
    if (r == "disagree") return {ClientMessage::Type::PilotResponse, PilotResponse::Disagree};
    throw ProtocolError("response must be \"agree\" or \"disagree\"");
  }
  if (type == "command") {
    if (!j.contains("name") || !j["name"].is_string())
      throw ProtocolError("command needs a string \"name\"");
    const auto name = j["name"].get<std::string>();
    if (name == "stop") return {ClientMessage::Type::Stop};
    if (name == "initiate_landing") return {ClientMessage::Type::InitiateLanding};
    throw ProtocolError("unknown command \"" + name + "\"");
  }
  throw ProtocolError("unknown message type \"" + type + "\"");
}

std::string error_message(std::string_view reason) {
  return json{{"type", "error"}, {"message", reason}}.dump();
}

namespace {

struct Command {
  int client = 0;
  ClientMessage message;
};

class Session;

}  // namespace

struct InteractiveServer::Impl {
  ScenarioConfig config;
  InteractiveOptions options;

  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  net::executor_work_guard<net::io_context::executor_type> work{ioc.get_executor()};
  net::steady_timer grace{ioc};
  std::thread io_thread;

  // io thread only
  std::map<int, std::shared_ptr<Session>> sessions;
  int next_id = 1;
  bool closing = false;

  // shared between the two threads
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<Command> commands;
  bool client_seen = false;
  std::atomic<bool> stop{false};

  void accept();
  void handle_text(int client, const std::string& text);
  void broadcast(std::shared_ptr<const std::string> line);
  void send_to(int client, std::string text);
  void remove(int client);
  void close_all();
};

namespace {

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, InteractiveServer::Impl& server, int id)
      : ws_(std::move(socket)), server_(server), id_(id) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->accepted_ = true;
      self->server_.sessions[self->id_] = self;
      {
        std::lock_guard lock(self->server_.mutex);
        self->server_.client_seen = true;
      }
      self->server_.cv.notify_all();
      self->read();
    });
  }

  void send(std::shared_ptr<const std::string> text) {
    if (closing_) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  // Closes once every queued message has gone out.
  void close() {
    if (closing_) return;
    closing_ = true;
    if (queue_.empty()) do_close();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->server_.remove(self->id_);
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->server_.handle_text(self->id_, text);
      self->read();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(net::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->queue_.clear();
                        self->server_.remove(self->id_);
                        return;
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty())
                        self->write();
                      else if (self->closing_)
                        self->do_close();
                    });
  }

  void do_close() {
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {
                      self->server_.remove(self->id_);
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  InteractiveServer::Impl& server_;
  int id_;
  bool accepted_ = false;
  bool closing_ = false;
};

}  // namespace

void InteractiveServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<Session>(std::move(socket), *this, next_id++)->start();
    if (!closing) accept();
  });
}

void InteractiveServer::Impl::handle_text(int client, const std::string& text) {
  try {
    const ClientMessage m = parse_client_message(text);
    {
      std::lock_guard lock(mutex);
      commands.push_back({client, m});
    }
  } catch (const ProtocolError& e) {
    send_to(client, error_message(e.what()));
  }
}

void InteractiveServer::Impl::broadcast(std::shared_ptr<const std::string> line) {
  for (auto& [id, s] : sessions) s->send(line);
}

void InteractiveServer::Impl::send_to(int client, std::string text) {
  if (auto it = sessions.find(client); it != sessions.end())
    it->second->send(std::make_shared<const std::string>(std::move(text)));
}

void InteractiveServer::Impl::remove(int client) {
  sessions.erase(client);
  if (closing && sessions.empty()) ioc.stop();
}

void InteractiveServer::Impl::close_all() {
  closing = true;
  beast::error_code ignored;
  acceptor.close(ignored);
  if (sessions.empty()) {
    ioc.stop();
    return;
  }
  // Clients that never answer the close handshake are dropped.
  grace.expires_after(std::chrono::seconds(2));
  grace.async_wait([this](beast::error_code) { ioc.stop(); });
  auto open = sessions;
  for (auto& [id, s] : open) s->close();
}

InteractiveServer::InteractiveServer(const ScenarioConfig& config, InteractiveOptions options)
    : impl_(std::make_unique<Impl>()) {
  if (!std::holds_alternative<pilot::Console>(config.pilot_model.kind))
    throw ConfigError("interactive runs need the console pilot model");
  if (!(options.speed > 0.0)) throw ConfigError("speed must be > 0");
  impl_->config = config;
  impl_->options = std::move(options);

  beast::error_code ec;
  const auto address = net::ip::make_address(impl_->options.address, ec);
  if (ec) throw PortBindError("bad address \"" + impl_->options.address + "\"");
  const tcp::endpoint endpoint{address, impl_->options.port};
  auto& acc = impl_->acceptor;
  acc.open(endpoint.protocol(), ec);
  if (!ec) acc.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acc.bind(endpoint, ec);
  if (!ec) acc.listen(net::socket_base::max_listen_connections, ec);
  if (ec)
    throw PortBindError("cannot listen on " + impl_->options.address + ":" +
                        std::to_string(impl_->options.port) + ": " + ec.message());
}

InteractiveServer::~InteractiveServer() {
  if (impl_ && impl_->io_thread.joinable()) {
    impl_->ioc.stop();
    impl_->io_thread.join();
  }
}

std::uint16_t InteractiveServer::port() const noexcept {
  return impl_->acceptor.local_endpoint().port();
}

void InteractiveServer::request_stop() {
  impl_->stop = true;
  impl_->cv.notify_all();
}

int InteractiveServer::run() {
  Impl& s = *impl_;
  const ScenarioConfig& config = s.config;

  s.accept();
  s.io_thread = std::thread([&s] { s.ioc.run(); });

  std::optional<TraceWriter> writer;
  if (s.options.trace_out)
    writer.emplace(*s.options.trace_out,
                   make_header(config, RunMode::Interactive, 0, s.options.initial_q));

  if (s.options.wait_for_client) {
    std::unique_lock lock(s.mutex);
    s.cv.wait(lock, [&s] { return s.client_seen || s.stop.load(); });
  }

  EngineState state = initial_state(config, s.options.initial_q);
  RngStreams rng(config.seed);
  const Tick limit = s.options.max_ticks.value_or(config.max_ticks);
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / (config.tick_hz * s.options.speed)));
  auto next = std::chrono::steady_clock::now();

  // Pending responses survive across ticks; at most one is consumed per tick.
  std::deque<Command> responses;

  try {
    while (!s.stop && state.tick < limit) {
      {
        std::lock_guard lock(s.mutex);
        for (auto& c : s.commands) {
          if (c.message.type == ClientMessage::Type::PilotResponse) {
            responses.push_back(c);
          } else {
            if (c.message.type == ClientMessage::Type::InitiateLanding)
              std::clog << "tick " << state.tick << ": initiate_landing requested, ending run\n";
            s.stop = true;
          }
        }
        s.commands.clear();
      }
      if (s.stop) break;

      std::optional<PilotResponse> input;
      int from = 0;
      if (!responses.empty()) {
        input = responses.front().message.response;
        from = responses.front().client;
        responses.pop_front();
      }
      StepResult step;
      try {
        step = engine_step(state, input, config, rng);
      } catch (const ResponseWithoutAlertError& e) {
        net::post(s.ioc, [&s, from, msg = error_message(e.what())] { s.send_to(from, msg); });
        step = engine_step(state, std::nullopt, config, rng);
      }
      state = std::move(step.state);

      for (const auto& e : step.events) {
        if (writer) writer->write(e);
        auto line = std::make_shared<const std::string>(to_line(e));
        net::post(s.ioc, [&s, line] { s.broadcast(line); });
      }
      if (route_complete(state.aircraft, config.waypoints)) break;

      next += period;
      std::unique_lock lock(s.mutex);
      s.cv.wait_until(lock, next, [&s] { return s.stop.load(); });
    }
  } catch (...) {
    net::post(s.ioc, [&s] { s.close_all(); });
    s.io_thread.join();
    throw;
  }

  net::post(s.ioc, [&s] { s.close_all(); });
  s.io_thread.join();
  return 0;
}

}  // namespace leias
