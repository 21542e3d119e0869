#include "inspect/service.hpp"

#include <atomic>
#include <charconv>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <boost/asio/bind_executor.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "inspect/errors.hpp"
#include "inspect/wire.hpp"

namespace inspect {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

std::string_view mime_type(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

}  // namespace

class WsConnection;

struct InspectionService::Impl {
  Impl(Session s, ServiceOptions o) : session(std::move(s)), options(std::move(o)) {}

  void accept();
  void broadcast(const std::shared_ptr<const std::string>& message);
  /// Applies a client message. Returns an error text when rejected; the
  /// engine is not touched in that case.
  std::optional<std::string> handle_message(const std::string& text);

  Session session;
  ServiceOptions options;
  asio::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::set<std::shared_ptr<WsConnection>> connections;
  std::thread thread;
  std::atomic<std::size_t> frames{0};
  std::atomic<std::uint16_t> bound_port{0};
  bool running = false;
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket socket, InspectionService::Impl& owner)
      : ws_(std::move(socket)), owner_(owner) {}

  void start(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->owner_.connections.insert(self);
      self->send(std::make_shared<const std::string>(wire::hello_to_json(self->owner_.session).dump()));
      self->read();
    });
  }

  void send(std::shared_ptr<const std::string> message) {
    if (closing_) return;
    queue_.push_back(std::move(message));
    if (queue_.size() == 1) write_next();
  }

  void fail_and_close(const std::string& error) {
    send(std::make_shared<const std::string>(wire::error_to_json(error).dump()));
    closing_ = true;
    if (queue_.empty()) close();
  }

  void close() {
    owner_.connections.erase(shared_from_this());
    ws_.async_close(websocket::close_code::policy_error,
                    [self = shared_from_this()](beast::error_code) {});
  }

  void shutdown() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->owner_.connections.erase(self);
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      if (const auto error = self->owner_.handle_message(text)) {
        self->fail_and_close(*error);
        return;
      }
      self->read();
    });
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->owner_.connections.erase(self);
                        return;
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) {
                        self->write_next();
                      } else if (self->closing_) {
                        self->close();
                      }
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  InspectionService::Impl& owner_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  bool closing_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket socket, InspectionService::Impl& owner)
      : stream_(std::move(socket)), owner_(owner) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (ec) return;
                       self->on_request();
                     });
  }

 private:
  void on_request() {
    if (websocket::is_upgrade(request_)) {
      stream_.expires_never();
      std::make_shared<WsConnection>(stream_.release_socket(), owner_)->start(std::move(request_));
      return;
    }
    auto response = std::make_shared<http::response<http::string_body>>();
    response->version(request_.version());
    response->keep_alive(false);
    std::string target(request_.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target == "/") target = "/index.html";
    const std::filesystem::path rel = std::filesystem::path(target.substr(1)).lexically_normal();
    const bool safe = !rel.empty() && *rel.begin() != ".." && rel.is_relative();
    std::ifstream file;
    if (safe && !owner_.options.assets_dir.empty()) {
      file.open(owner_.options.assets_dir / rel, std::ios::binary);
    }
    if (request_.method() == http::verb::get && file.is_open() && file) {
      std::ostringstream body;
      body << file.rdbuf();
      response->result(http::status::ok);
      response->set(http::field::content_type, std::string(mime_type(rel)));
      response->body() = body.str();
    } else {
      response->result(http::status::not_found);
      response->set(http::field::content_type, "text/plain");
      response->body() = "not found\n";
    }
    response->prepare_payload();
    http::async_write(stream_, *response,
                      [self = shared_from_this(), response](beast::error_code, std::size_t) {
                        beast::error_code ec;
                        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                      });
  }

  beast::tcp_stream stream_;
  InspectionService::Impl& owner_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

void InspectionService::Impl::accept() {
  acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<HttpConnection>(std::move(socket), *this)->start();
    accept();
  });
}

void InspectionService::Impl::broadcast(const std::shared_ptr<const std::string>& message) {
  // Copy: send() may drop failed connections from the set.
  const auto targets = connections;
  for (const auto& c : targets) c->send(message);
}

std::optional<std::string> InspectionService::Impl::handle_message(const std::string& text) {
  InputFrame frame;
  try {
    frame = wire::parse_frame(text);
  } catch (const InputError& e) {
    return std::string(e.what());
  }
  Snapshot snap;
  try {
    snap = session.apply(frame);
  } catch (const FrameOrderError& e) {
    return std::string(e.what());
  }
  ++frames;
  broadcast(std::make_shared<const std::string>(wire::snapshot_to_json(snap).dump()));
  return std::nullopt;
}

InspectionService::InspectionService(Session session, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(session), std::move(options))) {}

InspectionService::~InspectionService() { stop(); }

void InspectionService::start() {
  Impl& s = *impl_;
  if (s.running) return;
  beast::error_code ec;
  const auto address = asio::ip::make_address(s.options.host, ec);
  if (ec) throw std::runtime_error("invalid bind address '" + s.options.host + "'");
  const tcp::endpoint endpoint(address, s.options.port);
  s.acceptor.open(endpoint.protocol(), ec);
  if (!ec) s.acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) s.acceptor.bind(endpoint, ec);
  if (!ec) s.acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    throw std::runtime_error("cannot bind " + s.options.host + ":" +
                             std::to_string(s.options.port) + ": " + ec.message());
  }
  s.bound_port = s.acceptor.local_endpoint().port();
  s.accept();
  s.running = true;
  s.thread = std::thread([&s] { s.ioc.run(); });
}

void InspectionService::stop() {
  Impl& s = *impl_;
  if (!s.running) return;
  asio::post(s.ioc, [&s] {
    beast::error_code ec;
    s.acceptor.close(ec);
    for (const auto& c : s.connections) c->shutdown();
    s.connections.clear();
    s.ioc.stop();
  });
  if (s.thread.joinable()) s.thread.join();
  s.running = false;
}

void InspectionService::run_until_signal() {
  asio::io_context signals_ioc;
  asio::signal_set signals(signals_ioc, SIGINT, SIGTERM);
  signals.async_wait([](beast::error_code, int) {});
  signals_ioc.run();
  stop();
}

std::uint16_t InspectionService::port() const { return impl_->bound_port; }

std::size_t InspectionService::frames_applied() const { return impl_->frames; }

ServiceOptions parse_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == bind.size()) {
    throw ConfigError("bind address must look like host:port, got '" + bind + "'");
  }
  ServiceOptions options;
  options.host = bind.substr(0, colon);
  unsigned value = 0;
  const char* first = bind.data() + colon + 1;
  const char* last = bind.data() + bind.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || value > 65535) {
    throw ConfigError("invalid port in bind address '" + bind + "'");
  }
  options.port = static_cast<std::uint16_t>(value);
  return options;
}

}  // namespace inspect
