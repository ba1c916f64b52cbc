#include "tradecredit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "tradecredit/errors.hpp"

namespace tradecredit {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_unit(double x, const std::string& path) {
  if (!std::isfinite(x) || x < 0 || x > 1) throw ValidationError(path, "must lie in [0, 1]");
}

void check_non_negative(double x, const std::string& path) {
  if (!std::isfinite(x) || x < 0) throw ValidationError(path, "must be non-negative");
}

// Typed access to one JSON object with path-addressed errors. finish()
// reports keys that were never read.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json& child(const std::string& key) {
    if (!has(key)) throw ValidationError(join(path_, key), "missing required field");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = child(key);
    if (!v.is_number()) throw ValidationError(join(path_, key), "expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  int integer(const std::string& key) {
    const json& v = child(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    throw ValidationError(join(path_, key), "expected an integer");
  }

  std::string string(const std::string& key) {
    const json& v = child(key);
    if (!v.is_string()) throw ValidationError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ValidationError(join(path_, key), "expected true or false");
    return v.get<bool>();
  }

  const json& array(const std::string& key) {
    const json& v = child(key);
    if (!v.is_array()) throw ValidationError(join(path_, key), "expected a list");
    return v;
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  /// Marks an optional key as known.
  void known(const std::string& key) { used_.insert(key); }

  void finish(const LoadOptions& options, std::vector<std::string>* warnings) const {
    for (const auto& [key, value] : j_.items()) {
      if (used_.count(key)) continue;
      if (options.strict) throw ValidationError(join(path_, key), "unknown field");
      if (warnings) warnings->push_back(join(path_, key) + ": unknown field ignored");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace

void validate(const PolicyScenario& s, const std::string& path) {
  check_non_negative(s.cash_revenue, join(path, "cr"));
  check_unit(s.variable_cost_ratio, join(path, "vc"));
  check_unit(s.bad_debt_rate, join(path, "bad_debt"));
  check_unit(s.discount_rate, join(path, "discount"));
  check_unit(s.discount_taker_share, join(path, "discount_taker_share"));
  if (s.mix.size() == 0) throw ValidationError(join(path, "mix"), "at least one payment row is required");
  for (Eigen::Index i = 0; i < s.mix.size(); ++i) {
    const std::string row = index(join(path, "mix"), static_cast<std::size_t>(i));
    check_unit(s.mix.shares(i), join(row, "share"));
    check_non_negative(s.mix.days(i), join(row, "day"));
  }
  const TradeCreditTerms& t = s.terms;
  if (t.discount_rate < 0 || t.discount_rate >= 1) throw ValidationError(join(path, "terms"), "discount must be in [0%, 100%)");
  if (t.discount_days < 0 || t.discount_days > t.net_days)
    throw ValidationError(join(path, "terms"), "discount period must lie between 0 and the net period");
  if (std::abs(s.discount_rate - t.discount_rate) > 1e-12)
    throw ValidationError(join(path, "discount"), "does not match the cash discount of the terms");
  if (t.discount_rate > 0) {
    const double takers = s.mix.share_on_day(t.discount_days);
    if (std::abs(s.discount_taker_share - takers) > 1e-9)
      throw ValidationError(join(path, "discount_taker_share"),
                            "must equal the share of sales paying on discount day " + std::to_string(t.discount_days));
  }
}

std::vector<std::string> scenario_warnings(const PolicyScenario& s, const std::string& path) {
  std::vector<std::string> out;
  if (!mix_is_complete(s.mix)) {
    std::ostringstream msg;
    msg << join(path, "mix") << ": payment shares sum to " << s.mix.total_share()
        << ", not 1; the collection period uses the shares as given";
    out.push_back(msg.str());
  }
  return out;
}

Eigen::Index PortfolioSection::column_of(const std::string& id) const {
  for (const auto& g : groups)
    if (g.id == id) return g.column;
  throw ValidationError("portfolio.groups", "unknown group '" + id + "'");
}

std::pair<Eigen::Index, Eigen::Index> PortfolioSection::select_pair(const std::vector<std::string>& ids) const {
  if (ids.empty()) {
    if (groups.size() < 2) throw ValidationError("portfolio.groups", "two groups are required");
    return {groups[0].column, groups[1].column};
  }
  if (ids.size() != 2) throw ValidationError("groups", "name exactly two groups");
  return {column_of(ids[0]), column_of(ids[1])};
}

const PolicyScenario& ScenarioFile::scenario(const std::string& name) const {
  auto it = scenarios.find(name);
  if (it == scenarios.end()) throw ValidationError("scenarios", "unknown scenario '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// JSON mapping
// ---------------------------------------------------------------------------

json to_json(const PolicyScenario& s) {
  json mix = json::array();
  for (Eigen::Index i = 0; i < s.mix.size(); ++i)
    mix.push_back({{"share", s.mix.shares(i)}, {"day", static_cast<long long>(s.mix.days(i))}});
  return {{"cr", s.cash_revenue},
          {"vc", s.variable_cost_ratio},
          {"terms", format_terms(s.terms)},
          {"bad_debt", s.bad_debt_rate},
          {"discount", s.discount_rate},
          {"discount_taker_share", s.discount_taker_share},
          {"mix", mix}};
}

json to_json(const FirmParametersd& f) {
  json j = {{"wacc", f.wacc}, {"k_aar", f.receivables_opex_rate}, {"tax", f.tax_rate}, {"horizon", f.horizon.years}};
  if (f.horizon.perpetuity) j["perpetuity"] = true;
  return j;
}

json to_json(const PortfolioSection& p) {
  json groups = json::array();
  for (const auto& g : p.groups) {
    json jg = {{"id", g.id}};
    if (!g.label.empty()) jg["label"] = g.label;
    groups.push_back(jg);
  }
  json states = json::array();
  for (Eigen::Index i = 0; i < p.table.states(); ++i) {
    json returns = json::array();
    for (Eigen::Index c = 0; c < p.table.groups(); ++c) returns.push_back(p.table.returns(i, c));
    states.push_back({{"p", p.table.probabilities(i)}, {"returns", returns}});
  }
  return {{"groups", groups}, {"states", states}};
}

json to_json(const ScenarioFile& f) {
  json scenarios = json::object();
  for (const auto& [name, s] : f.scenarios) scenarios[name] = to_json(s);
  json j = {{"firm", to_json(f.firm)}, {"scenarios", scenarios}};
  if (!f.base.empty()) j["base"] = f.base;
  if (f.portfolio) j["portfolio"] = to_json(*f.portfolio);
  return j;
}

PolicyScenario scenario_from_json(const json& j, const std::string& path, const LoadOptions& options,
                                  std::vector<std::string>* warnings) {
  ObjectReader r(j, path);
  PolicyScenario s;
  s.cash_revenue = r.number("cr");
  s.variable_cost_ratio = r.number("vc");
  s.bad_debt_rate = r.number("bad_debt");

  const std::string terms_text = r.string("terms");
  try {
    s.terms = parse_terms(terms_text);
  } catch (const ParseError& e) {
    throw ParseError(e.position(), r.path("terms") + ": " + e.what());
  }

  const json& rows = r.array("mix");
  if (rows.empty()) throw ValidationError(r.path("mix"), "at least one payment row is required");
  s.mix.shares.resize(static_cast<Eigen::Index>(rows.size()));
  s.mix.days.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ObjectReader row(rows[i], index(r.path("mix"), i));
    s.mix.shares(static_cast<Eigen::Index>(i)) = row.number("share");
    const int day = row.integer("day");
    if (day < 0) throw ValidationError(row.path("day"), "must be non-negative");
    s.mix.days(static_cast<Eigen::Index>(i)) = day;
    row.finish(options, warnings);
  }

  s.discount_rate = r.optional_number("discount").value_or(s.terms.discount_rate);
  const double takers = s.terms.discount_rate > 0 ? s.mix.share_on_day(s.terms.discount_days) : 0.0;
  s.discount_taker_share = r.optional_number("discount_taker_share").value_or(takers);
  r.finish(options, warnings);
  validate(s, path);
  if (warnings) {
    for (auto& w : scenario_warnings(s, path)) warnings->push_back(std::move(w));
  }
  return s;
}

FirmParametersd firm_from_json(const json& j, const std::string& path, const LoadOptions& options,
                               std::vector<std::string>* warnings) {
  ObjectReader r(j, path);
  FirmParametersd f;
  f.wacc = r.number("wacc");
  f.receivables_opex_rate = r.number("k_aar");
  f.tax_rate = r.number("tax");
  f.horizon.years = r.integer("horizon");
  f.horizon.perpetuity = r.boolean("perpetuity", false);
  r.finish(options, warnings);
  check_unit(f.wacc, r.path("wacc"));
  if (f.wacc <= 0) throw ValidationError(r.path("wacc"), "must be positive");
  check_unit(f.receivables_opex_rate, r.path("k_aar"));
  check_unit(f.tax_rate, r.path("tax"));
  if (f.horizon.years < 1) throw ValidationError(r.path("horizon"), "must be at least one year");
  return f;
}

PortfolioSection portfolio_from_json(const json& j, const std::string& path, const LoadOptions& options,
                                     std::vector<std::string>* warnings) {
  ObjectReader r(j, path);
  PortfolioSection p;
  const json& groups = r.array("groups");
  if (groups.empty()) throw ValidationError(r.path("groups"), "at least one group is required");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    ObjectReader g(groups[i], index(r.path("groups"), i));
    ReceivableGroup group;
    group.id = g.string("id");
    if (g.has("label")) group.label = g.string("label");
    g.known("label");
    group.column = static_cast<Eigen::Index>(i);
    if (!ids.insert(group.id).second) throw ValidationError(g.path("id"), "duplicate group '" + group.id + "'");
    g.finish(options, warnings);
    p.groups.push_back(group);
  }

  const json& states = r.array("states");
  if (states.empty()) throw ValidationError(r.path("states"), "at least one state is required");
  const auto n_states = static_cast<Eigen::Index>(states.size());
  const auto n_groups = static_cast<Eigen::Index>(groups.size());
  p.table.probabilities.resize(n_states);
  p.table.returns.resize(n_states, n_groups);
  for (std::size_t i = 0; i < states.size(); ++i) {
    ObjectReader st(states[i], index(r.path("states"), i));
    const double prob = st.number("p");
    check_unit(prob, st.path("p"));
    p.table.probabilities(static_cast<Eigen::Index>(i)) = prob;
    const json& returns = st.array("returns");
    if (static_cast<Eigen::Index>(returns.size()) != n_groups)
      throw ValidationError(st.path("returns"), "expected one return per group (" + std::to_string(n_groups) + ")");
    for (std::size_t c = 0; c < returns.size(); ++c) {
      if (!returns[c].is_number()) throw ValidationError(index(st.path("returns"), c), "expected a number");
      p.table.returns(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = returns[c].get<double>();
    }
    st.finish(options, warnings);
  }
  r.finish(options, warnings);
  try {
    validate(p.table);
  } catch (const ValidationError& e) {
    throw ValidationError(join(path, e.path()), e.message());
  }
  return p;
}

ScenarioFile scenario_file_from_json(const json& j, const LoadOptions& options) {
  ScenarioFile f;
  ObjectReader r(j, "");
  f.firm = firm_from_json(r.child("firm"), "firm", options, &f.warnings);
  const json& scenarios = r.child("scenarios");
  if (!scenarios.is_object() || scenarios.empty())
    throw ValidationError("scenarios", "expected a non-empty map of named scenarios");
  for (const auto& [name, body] : scenarios.items()) {
    if (name.empty()) throw ValidationError("scenarios", "scenario names must be non-empty");
    f.scenarios.emplace(name, scenario_from_json(body, "scenarios." + name, options, &f.warnings));
  }
  if (r.has("base")) {
    f.base = r.string("base");
    if (!f.scenarios.count(f.base)) throw ValidationError("base", "unknown scenario '" + f.base + "'");
  }
  r.known("base");
  if (r.has("portfolio")) f.portfolio = portfolio_from_json(r.child("portfolio"), "portfolio", options, &f.warnings);
  r.known("portfolio");
  r.finish(options, &f.warnings);
  return f;
}

// ---------------------------------------------------------------------------
// YAML <-> JSON
// ---------------------------------------------------------------------------

namespace {

json yaml_scalar(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted
  if (text == "true" || text == "True" || text == "TRUE") return true;
  if (text == "false" || text == "False" || text == "FALSE") return false;
  if (text.empty() || text == "~" || text == "null" || text == "Null" || text == "NULL") return nullptr;
  char* end = nullptr;
  const long long as_int = std::strtoll(text.c_str(), &end, 10);
  if (end && *end == '\0' && text.find_first_of("+-0123456789") == 0) return as_int;
  const double as_double = std::strtod(text.c_str(), &end);
  if (end && *end == '\0' && std::isfinite(as_double)) return as_double;
  return text;
}

json yaml_node(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return yaml_scalar(node);
    case YAML::NodeType::Sequence: {
      json out = json::array();
      for (const auto& item : node) out.push_back(yaml_node(item));
      return out;
    }
    case YAML::NodeType::Map: {
      json out = json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_node(kv.second);
      return out;
    }
  }
  return nullptr;
}

void emit(YAML::Emitter& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object:
      out << YAML::BeginMap;
      for (const auto& [key, value] : j.items()) {
        out << YAML::Key << key << YAML::Value;
        emit(out, value);
      }
      out << YAML::EndMap;
      break;
    case json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_primitive(); });
      if (flat) out << YAML::Flow;
      out << YAML::BeginSeq;
      for (const auto& value : j) emit(out, value);
      out << YAML::EndSeq;
      break;
    }
    case json::value_t::string:
      out << j.get<std::string>();
      break;
    case json::value_t::null:
      out << YAML::Null;
      break;
    default:
      // numbers and booleans: JSON's shortest round-trip spelling is valid YAML
      out << j.dump();
      break;
  }
}

}  // namespace

json yaml_to_json(const std::string& text) {
  try {
    return yaml_node(YAML::Load(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(static_cast<std::size_t>(std::max(e.mark.pos, 0)),
                     "invalid YAML (line " + std::to_string(e.mark.line + 1) + "): " + e.msg);
  }
}

std::string to_yaml(const json& j) {
  YAML::Emitter out;
  emit(out, j);
  return std::string(out.c_str()) + "\n";
}

ScenarioFile parse_scenario_file(const std::string& text, bool yaml, const LoadOptions& options) {
  json j;
  if (yaml) {
    j = yaml_to_json(text);
  } else {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(e.byte > 0 ? e.byte - 1 : 0, std::string("invalid JSON: ") + e.what());
    }
  }
  return scenario_file_from_json(j, options);
}

namespace {

bool is_yaml_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".yaml" || ext == ".yml";
}

}  // namespace

ScenarioFile load_scenario_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read scenario file '" + path.string() + "'");
  return parse_scenario_file(buffer.str(), is_yaml_path(path), options);
}

void save_scenario_file(const ScenarioFile& file, const std::filesystem::path& path) {
  const json j = to_json(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write scenario file '" + path.string() + "'");
  out << (is_yaml_path(path) ? to_yaml(j) : j.dump(2) + "\n");
  if (!out) throw IoError("cannot write scenario file '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

IncrementalReportd evaluate_policy_change(const PolicyScenario& base, const PolicyScenario& proposal,
                                          const FirmParametersd& firm) {
  validate(base, "base");
  validate(proposal, "proposal");
  // the proposal's cost structure prices sales it adds, the base's prices
  // sales it loses
  return incremental_analysis(base.mix, base.regime(), proposal.mix, proposal.regime(),
                              proposal.variable_cost_ratio, base.variable_cost_ratio, firm);
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::ValueCreating:
      return "value-creating";
    case Verdict::ValueDestroying:
      return "value-destroying";
    case Verdict::Neutral:
      break;
  }
  return "neutral";
}

Verdict verdict_for(double delta_v) {
  if (delta_v > 0) return Verdict::ValueCreating;
  if (delta_v < 0) return Verdict::ValueDestroying;
  return Verdict::Neutral;
}

FrontierSection make_frontier_section(const TwoGroupInputsd& inputs, double step, std::string first_group,
                                      std::string second_group) {
  FrontierSection f;
  f.first_group = std::move(first_group);
  f.second_group = std::move(second_group);
  f.inputs = inputs;
  f.step = step;
  f.points = frontier(inputs, step);
  const auto efficient = efficient_subset(f.points);
  f.efficient.reserve(f.points.size());
  for (const auto& p : f.points) f.efficient.push_back(is_efficient(p, efficient));
  f.min_risk = portfolio_stats(min_risk_weight(inputs), inputs);
  return f;
}

std::pair<std::string, std::string> resolve_comparison(const ScenarioFile& file, std::string base,
                                                       std::string proposal) {
  if (base.empty()) base = file.base;
  if (base.empty()) throw ValidationError("base", "no base scenario named and the file declares none");
  if (!file.scenarios.count(base)) throw ValidationError("base", "unknown scenario '" + base + "'");
  if (proposal.empty()) {
    std::vector<std::string> others;
    for (const auto& [name, s] : file.scenarios)
      if (name != base) others.push_back(name);
    if (others.size() != 1)
      throw ValidationError("proposal", "name the proposal; the file has " + std::to_string(others.size()) +
                                            " candidates");
    proposal = others.front();
  }
  if (!file.scenarios.count(proposal)) throw ValidationError("proposal", "unknown scenario '" + proposal + "'");
  return {base, proposal};
}

ComparisonReport compare_scenarios(const ScenarioFile& file, const std::string& base_name,
                                   const std::string& proposal_name) {
  auto lookup = [&](const std::string& name, const char* role) -> const PolicyScenario& {
    auto it = file.scenarios.find(name);
    if (it == file.scenarios.end()) throw ValidationError(role, "unknown scenario '" + name + "'");
    return it->second;
  };
  const PolicyScenario& base = lookup(base_name, "base");
  const PolicyScenario& proposal = lookup(proposal_name, "proposal");

  ComparisonReport report;
  report.base_name = base_name;
  report.proposal_name = proposal_name;
  report.firm = file.firm;
  report.incremental = evaluate_policy_change(base, proposal, file.firm);
  report.verdict = verdict_for(report.incremental.delta_v);
  for (const auto* name : {&base_name, &proposal_name}) {
    for (auto& w : scenario_warnings(file.scenario(*name), "scenarios." + *name)) {
      if (std::find(report.warnings.begin(), report.warnings.end(), w) == report.warnings.end())
        report.warnings.push_back(std::move(w));
    }
  }
  if (file.portfolio && file.portfolio->groups.size() >= 2) {
    const auto& groups = file.portfolio->groups;
    try {
      report.frontier = make_frontier_section(two_group_inputs(file.portfolio->table, groups[0].column, groups[1].column),
                                              kDefaultFrontierStep, groups[0].id, groups[1].id);
    } catch (const UndefinedError& e) {
      report.warnings.push_back(std::string("portfolio: ") + e.what() + "; frontier omitted");
    }
  }
  return report;
}

}  // namespace tradecredit
