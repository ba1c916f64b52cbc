#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace tradecredit {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path store_dir = "scenario-store";
  std::optional<std::filesystem::path> static_dir;  // UI bundle served under /
};

/// HTTP front end for the JSON API:
///   POST /api/evaluate, /api/frontier, /api/simulate
///   GET, PUT /api/scenarios/{name}
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket; returns the bound port. Throws IoError on failure.
  int bind();

  /// Serves until stop() is called. bind() must have succeeded.
  void run();

  /// Blocks until run() is accepting connections.
  void wait_until_ready() const;

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tradecredit
