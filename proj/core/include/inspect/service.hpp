#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "inspect/session.hpp"

namespace inspect {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  std::filesystem::path assets_dir;  // optional static files for plain HTTP GETs
};

/// WebSocket front end for one Session.
///
/// Every connection receives a `hello` message first. Any connection may
/// send InputFrame records (one JSON object per message); each applied frame
/// is broadcast as a snapshot to all connections, in application order. A
/// malformed or out-of-order message earns that connection an error message
/// and a close; the session is left untouched. All engine work runs on the
/// service's single I/O thread.
class InspectionService {
 public:
  InspectionService(Session session, ServiceOptions options);
  ~InspectionService();

  InspectionService(const InspectionService&) = delete;
  InspectionService& operator=(const InspectionService&) = delete;

  /// Binds and starts the I/O thread. Throws std::runtime_error on bind failure.
  void start();
  void stop();

  /// Blocks until SIGINT or SIGTERM, then stops the service.
  void run_until_signal();

  std::uint16_t port() const;

  /// Number of frames applied so far (thread-safe).
  std::size_t frames_applied() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// Parses `host:port`; throws ConfigError when malformed.
ServiceOptions parse_bind(const std::string& bind);

}  // namespace inspect
