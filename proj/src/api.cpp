#include "tradecredit/api.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "tradecredit/errors.hpp"
#include "tradecredit/report.hpp"
#include "tradecredit/scenario.hpp"
#include "tradecredit/simulation.hpp"

namespace tradecredit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// ScenarioStore
// ---------------------------------------------------------------------------

ScenarioStore::ScenarioStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create scenario store '" + dir_.string() + "': " + ec.message());
}

void ScenarioStore::check_name(const std::string& name) {
  static const std::regex valid("[A-Za-z0-9_-]+");
  if (!std::regex_match(name, valid)) throw ValidationError("name", "scenario names use letters, digits, '_' and '-'");
}

std::filesystem::path ScenarioStore::path_for(const std::string& name) const { return dir_ / (name + ".json"); }

std::shared_mutex& ScenarioStore::lock_for(const std::string& name) const {
  std::lock_guard guard(registry_mutex_);
  auto& slot = locks_[name];
  if (!slot) slot = std::make_unique<std::shared_mutex>();
  return *slot;
}

ScenarioStore::Entry ScenarioStore::get(const std::string& name) const {
  check_name(name);
  std::shared_lock read(lock_for(name));
  std::ifstream in(path_for(name), std::ios::binary);
  if (!in) throw NotFoundError("no stored scenario '" + name + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Entry entry;
  try {
    entry.file = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw IoError("stored scenario '" + name + "' is corrupt: " + e.what());
  }
  std::lock_guard guard(registry_mutex_);
  auto it = versions_.find(name);
  entry.version = it == versions_.end() ? 0 : it->second;
  return entry;
}

std::uint64_t ScenarioStore::put(const std::string& name, const json& file) {
  check_name(name);
  const ScenarioFile parsed = scenario_file_from_json(file);
  const std::string text = dump_machine(to_json(parsed));

  std::unique_lock write(lock_for(name));
  const auto target = path_for(name);
  auto temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + temp.string() + "'");
    out << text;
    if (!out) throw IoError("cannot write '" + temp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) throw IoError("cannot replace '" + target.string() + "': " + ec.message());
  std::lock_guard guard(registry_mutex_);
  return ++versions_[name];
}

// ---------------------------------------------------------------------------
// Handlers
// ---------------------------------------------------------------------------

namespace {

json request_id(const json& request) {
  if (request.is_object() && request.contains("request_id")) return request.at("request_id");
  return nullptr;
}

json error_body(const json& id, const std::string& code, const std::string& message, const json& extra = json::object()) {
  json error = {{"code", code}, {"message", message}};
  error.update(extra);
  return {{"request_id", id}, {"error", error}};
}

template <typename Fn>
ApiResponse guarded(const json& request, Fn&& fn) {
  const json id = request_id(request);
  try {
    ApiResponse response = fn();
    if (response.body.is_object()) response.body["request_id"] = id;
    return response;
  } catch (const ValidationError& e) {
    return {400, error_body(id, "validation", e.what(), {{"path", e.path()}})};
  } catch (const ParseError& e) {
    return {400, error_body(id, "parse", e.what(), {{"position", e.position()}})};
  } catch (const NotFoundError& e) {
    return {404, error_body(id, "not_found", e.what())};
  } catch (const UndefinedError& e) {
    return {422, error_body(id, "undefined", e.what())};
  } catch (const IoError& e) {
    return {500, error_body(id, "io", e.what())};
  } catch (const json::exception& e) {
    return {400, error_body(id, "validation", e.what())};
  }
}

void require_object(const json& request) {
  if (!request.is_object()) throw ValidationError("", "request body must be a JSON object");
}

std::string optional_string(const json& request, const char* key) {
  if (!request.contains(key) || request.at(key).is_null()) return {};
  if (!request.at(key).is_string()) throw ValidationError(key, "expected a string");
  return request.at(key).get<std::string>();
}

double required_number(const json& request, const char* key) {
  if (!request.contains(key)) throw ValidationError(key, "missing required field");
  if (!request.at(key).is_number()) throw ValidationError(key, "expected a number");
  return request.at(key).get<double>();
}

std::vector<std::string> group_ids(const json& request) {
  std::vector<std::string> ids;
  if (!request.contains("groups")) return ids;
  const json& g = request.at("groups");
  if (!g.is_array()) throw ValidationError("groups", "expected a list of two group ids");
  for (const auto& id : g) {
    if (!id.is_string()) throw ValidationError("groups", "expected group ids");
    ids.push_back(id.get<std::string>());
  }
  return ids;
}

}  // namespace

ApiResponse handle_evaluate(const json& request, const ScenarioStore* store) {
  return guarded(request, [&]() -> ApiResponse {
    require_object(request);
    if (!request.contains("file")) throw ValidationError("file", "missing required field");
    const json& file_ref = request.at("file");
    json file_json;
    if (file_ref.is_string()) {
      if (!store) throw NotFoundError("no scenario store configured");
      file_json = store->get(file_ref.get<std::string>()).file;
    } else {
      file_json = file_ref;
    }
    const ScenarioFile file = scenario_file_from_json(file_json);
    const auto [base, proposal] =
        resolve_comparison(file, optional_string(request, "base"), optional_string(request, "proposal"));
    const ComparisonReport report = compare_scenarios(file, base, proposal);
    return {200, {{"report", to_json(report)}, {"warnings", report.warnings}}};
  });
}

ApiResponse handle_frontier(const json& request) {
  return guarded(request, [&]() -> ApiResponse {
    require_object(request);
    const double step = request.contains("step") ? required_number(request, "step") : kDefaultFrontierStep;
    FrontierSection section;
    if (request.contains("portfolio")) {
      const PortfolioSection portfolio = portfolio_from_json(request.at("portfolio"));
      const auto [first, second] = portfolio.select_pair(group_ids(request));
      section = make_frontier_section(two_group_inputs(portfolio.table, first, second), step,
                                      portfolio.groups[static_cast<std::size_t>(first)].id,
                                      portfolio.groups[static_cast<std::size_t>(second)].id);
    } else {
      TwoGroupInputsd in;
      in.first = {required_number(request, "r1"), required_number(request, "s1")};
      in.second = {required_number(request, "r2"), required_number(request, "s2")};
      in.rho = required_number(request, "rho");
      section = make_frontier_section(in, step);
    }
    return {200, {{"frontier", to_json(section)}, {"warnings", json::array()}}};
  });
}

ApiResponse handle_simulate(const json& request) {
  return guarded(request, [&]() -> ApiResponse {
    require_object(request);
    if (!request.contains("portfolio")) throw ValidationError("portfolio", "missing required field");
    const PortfolioSection portfolio = portfolio_from_json(request.at("portfolio"));
    const auto [first, second] = portfolio.select_pair(group_ids(request));
    if (!request.contains("draws") || !request.at("draws").is_number_integer())
      throw ValidationError("draws", "expected a positive integer");
    const auto draws = request.at("draws").get<std::int64_t>();
    if (draws < 1 || draws > kMaxSimulationDraws)
      throw ValidationError("draws", "must lie in [1, " + std::to_string(kMaxSimulationDraws) + "]");
    if (!request.contains("seed") || !request.at("seed").is_number_integer() || request.at("seed").get<std::int64_t>() < 0)
      throw ValidationError("seed", "expected a non-negative integer");
    const auto seed = request.at("seed").get<std::uint64_t>();
    const SampleStatistics stats = simulate_groups(portfolio.table, first, second, draws, seed);
    json warnings = json::array();
    if (!stats.correlation) warnings.push_back("sample correlation undefined: a group has zero sample variance");
    return {200, {{"simulation", to_json(stats)}, {"warnings", warnings}}};
  });
}

ApiResponse handle_get_scenario(const std::string& name, const ScenarioStore& store) {
  return guarded(json::object(), [&]() -> ApiResponse {
    const auto entry = store.get(name);
    return {200, {{"name", name}, {"version", entry.version}, {"file", entry.file}}};
  });
}

ApiResponse handle_put_scenario(const std::string& name, const json& body, ScenarioStore& store) {
  return guarded(json::object(), [&]() -> ApiResponse {
    const std::uint64_t version = store.put(name, body);
    return {200, {{"name", name}, {"version", version}}};
  });
}

ApiResponse handle_raw(const std::string& body, const std::function<ApiResponse(const json&)>& handler) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return {400, error_body(nullptr, "parse", std::string("invalid JSON: ") + e.what(),
                            {{"position", e.byte > 0 ? e.byte - 1 : 0}})};
  }
  return handler(request);
}

}  // namespace tradecredit
