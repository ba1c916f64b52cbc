#pragma once

// JSON request handlers behind the HTTP service. Each handler maps a parsed
// request body to a status code and a response body, so the CLI, the server
// and the tests all share one code path.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace tradecredit {

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario files kept as <dir>/<name>.json. Reads of one name run
/// concurrently; writes to one name are serialised and bump its version.
class ScenarioStore {
 public:
  explicit ScenarioStore(std::filesystem::path dir);

  struct Entry {
    nlohmann::json file;
    std::uint64_t version = 0;
  };

  /// Throws NotFoundError for an unknown name.
  Entry get(const std::string& name) const;

  /// Validates `file` as a scenario file, writes it and returns the new
  /// version. Last writer wins.
  std::uint64_t put(const std::string& name, const nlohmann::json& file);

  const std::filesystem::path& dir() const { return dir_; }

  /// Names are [A-Za-z0-9_-]+; anything else throws ValidationError.
  static void check_name(const std::string& name);

 private:
  std::shared_mutex& lock_for(const std::string& name) const;
  std::filesystem::path path_for(const std::string& name) const;

  std::filesystem::path dir_;
  mutable std::mutex registry_mutex_;
  mutable std::map<std::string, std::unique_ptr<std::shared_mutex>> locks_;
  std::map<std::string, std::uint64_t> versions_;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// {"request_id"?, "file": <scenario file> | "<stored name>", "base"?, "proposal"?}
/// -> {"request_id", "report", "warnings"}
ApiResponse handle_evaluate(const nlohmann::json& request, const ScenarioStore* store);

/// {"request_id"?, "r1", "r2", "s1", "s2", "rho", "step"?}
/// or {"request_id"?, "portfolio", "groups"?: [id, id], "step"?}
/// -> {"request_id", "frontier", "warnings"}
ApiResponse handle_frontier(const nlohmann::json& request);

/// {"request_id"?, "portfolio", "groups"?: [id, id], "draws", "seed"}
/// -> {"request_id", "simulation", "warnings"}
ApiResponse handle_simulate(const nlohmann::json& request);

ApiResponse handle_get_scenario(const std::string& name, const ScenarioStore& store);
ApiResponse handle_put_scenario(const std::string& name, const nlohmann::json& body, ScenarioStore& store);

/// Parses a raw request body and dispatches; malformed JSON gives a 400.
ApiResponse handle_raw(const std::string& body, const std::function<ApiResponse(const nlohmann::json&)>& handler);

inline constexpr std::int64_t kMaxSimulationDraws = 100'000'000;

}  // namespace tradecredit
