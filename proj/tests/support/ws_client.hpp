#pragma once

// Minimal blocking WebSocket client for exercising the service in-process.

#include <cstdint>
#include <string>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

namespace inspect::testing {

class WsClient {
 public:
  /// Connects and consumes the hello message.
  explicit WsClient(std::uint16_t port) : ws_(ioc_) {
    boost::asio::ip::tcp::resolver resolver(ioc_);
    boost::asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/");
    hello_ = read();
  }

  const nlohmann::json& hello() const { return hello_; }

  void send(const std::string& text) { ws_.write(boost::asio::buffer(text)); }

  nlohmann::json read() {
    boost::beast::flat_buffer buffer;
    ws_.read(buffer);
    return nlohmann::json::parse(boost::beast::buffers_to_string(buffer.data()));
  }

  /// True when the server has closed the connection.
  bool closed() {
    boost::beast::flat_buffer buffer;
    boost::beast::error_code ec;
    ws_.read(buffer, ec);
    return ec == boost::beast::websocket::error::closed || ec == boost::asio::error::eof ||
           ec == boost::asio::error::connection_reset;
  }

 private:
  boost::asio::io_context ioc_;
  boost::beast::websocket::stream<boost::asio::ip::tcp::socket> ws_;
  nlohmann::json hello_;
};

}  // namespace inspect::testing
