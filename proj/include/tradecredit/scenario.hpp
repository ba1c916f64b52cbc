#pragma once

// Policy scenarios, scenario files and the incremental comparison of two
// trade-credit regimes.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tradecredit/portfolio.hpp"
#include "tradecredit/terms.hpp"
#include "tradecredit/valuation.hpp"

namespace tradecredit {

/// One trade-credit regime.
struct PolicyScenario {
  double cash_revenue = 0;
  double variable_cost_ratio = 0;
  PaymentMixd mix;
  TradeCreditTerms terms;
  double bad_debt_rate = 0;
  double discount_rate = 0;         // equals terms.discount_rate
  double discount_taker_share = 0;  // share of sales paying on the discount day

  CreditRegimed regime() const { return {cash_revenue, bad_debt_rate, discount_rate, discount_taker_share}; }
};

/// Validates ranges and the consistency of the discount with the terms and
/// the mix. `path` prefixes error messages.
void validate(const PolicyScenario& scenario, const std::string& path = "");

/// Non-fatal findings about a scenario, e.g. a mix whose shares miss 1.
std::vector<std::string> scenario_warnings(const PolicyScenario& scenario, const std::string& path);

/// Group returns for the portfolio section of a scenario file.
struct PortfolioSection {
  StateTabled table;
  std::vector<ReceivableGroup> groups;

  /// Column of the group called `id`; throws ValidationError when absent.
  Eigen::Index column_of(const std::string& id) const;

  /// Columns of the two named groups, or of the first two groups when `ids`
  /// is empty.
  std::pair<Eigen::Index, Eigen::Index> select_pair(const std::vector<std::string>& ids) const;
};

struct ScenarioFile {
  FirmParametersd firm;
  std::map<std::string, PolicyScenario> scenarios;
  std::string base;  // default base scenario name, may be empty
  std::optional<PortfolioSection> portfolio;

  std::vector<std::string> warnings;  // collected on load, never saved

  const PolicyScenario& scenario(const std::string& name) const;
};

struct LoadOptions {
  bool strict = true;  // unknown keys are errors rather than warnings
};

// JSON mapping. Readers throw ValidationError with a dotted path to the
// offending field; `path` is the location of `j` inside the document.
nlohmann::json to_json(const PolicyScenario& scenario);
nlohmann::json to_json(const FirmParametersd& firm);
nlohmann::json to_json(const PortfolioSection& portfolio);
nlohmann::json to_json(const ScenarioFile& file);

PolicyScenario scenario_from_json(const nlohmann::json& j, const std::string& path = "",
                                  const LoadOptions& options = {}, std::vector<std::string>* warnings = nullptr);
FirmParametersd firm_from_json(const nlohmann::json& j, const std::string& path = "firm",
                               const LoadOptions& options = {}, std::vector<std::string>* warnings = nullptr);
PortfolioSection portfolio_from_json(const nlohmann::json& j, const std::string& path = "portfolio",
                                     const LoadOptions& options = {}, std::vector<std::string>* warnings = nullptr);
ScenarioFile scenario_file_from_json(const nlohmann::json& j, const LoadOptions& options = {});

/// Parses scenario file text. `yaml` selects the human-editable syntax;
/// otherwise the text is JSON. Syntax errors throw ParseError.
ScenarioFile parse_scenario_file(const std::string& text, bool yaml, const LoadOptions& options = {});

/// Reads a .json, .yaml or .yml scenario file. Throws IoError when the file
/// cannot be read.
ScenarioFile load_scenario_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes `file` in the syntax implied by the extension of `path`.
void save_scenario_file(const ScenarioFile& file, const std::filesystem::path& path);

std::string to_yaml(const nlohmann::json& j);
nlohmann::json yaml_to_json(const std::string& text);

/// Incremental analysis of moving from `base` to `proposal`.
IncrementalReportd evaluate_policy_change(const PolicyScenario& base, const PolicyScenario& proposal,
                                          const FirmParametersd& firm);

enum class Verdict { ValueCreating, ValueDestroying, Neutral };

std::string to_string(Verdict verdict);
Verdict verdict_for(double delta_v);

/// Two-group frontier attached to a comparison when the file carries a
/// portfolio section.
struct FrontierSection {
  std::string first_group;
  std::string second_group;
  TwoGroupInputsd inputs;
  double step = kDefaultFrontierStep;
  FrontierPointd min_risk;
  std::vector<FrontierPointd> points;
  std::vector<bool> efficient;  // parallel to points
};

FrontierSection make_frontier_section(const TwoGroupInputsd& inputs, double step, std::string first_group = "1",
                                      std::string second_group = "2");

struct ComparisonReport {
  std::string base_name;
  std::string proposal_name;
  FirmParametersd firm;
  IncrementalReportd incremental;
  Verdict verdict = Verdict::Neutral;
  std::vector<std::string> warnings;
  std::optional<FrontierSection> frontier;
};

/// Fills in omitted names: the base defaults to `file.base`, the proposal to
/// the only scenario other than the base. Throws ValidationError when a name
/// cannot be resolved.
std::pair<std::string, std::string> resolve_comparison(const ScenarioFile& file, std::string base,
                                                       std::string proposal);

/// Compares two named scenarios of `file`. When the file has a portfolio
/// with at least two groups, the first two groups' frontier is attached.
ComparisonReport compare_scenarios(const ScenarioFile& file, const std::string& base_name,
                                   const std::string& proposal_name);

}  // namespace tradecredit
