// tcredit: evaluate trade credit policy changes, explore receivables
// portfolio frontiers and serve the JSON API.
//
// Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 unparsable input.

#include <csignal>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tradecredit/api.hpp"
#include "tradecredit/errors.hpp"
#include "tradecredit/report.hpp"
#include "tradecredit/scenario.hpp"
#include "tradecredit/server.hpp"
#include "tradecredit/simulation.hpp"

using namespace tradecredit;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitParse = 3;

struct EvaluateArgs {
  std::string file;
  std::string base;
  std::string proposal;
  std::string format = "text";
  bool lenient = false;
};

struct FrontierArgs {
  std::string file;
  std::vector<std::string> groups;
  std::optional<double> r1, r2, s1, s2, rho;
  double step = kDefaultFrontierStep;
  std::string format = "text";
};

struct SimulateArgs {
  std::string file;
  std::vector<std::string> groups;
  std::int64_t draws = 1'000'000;
  std::uint64_t seed = 42;
  std::string format = "text";
};

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store = "scenario-store";
  std::string static_dir;
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int run_evaluate(const EvaluateArgs& args) {
  const ReportFormat format = parse_report_format(args.format);
  const ScenarioFile file = load_scenario_file(args.file, LoadOptions{!args.lenient});
  const auto [base, proposal] = resolve_comparison(file, args.base, args.proposal);
  const ComparisonReport report = compare_scenarios(file, base, proposal);
  std::vector<std::string> warnings = report.warnings;
  for (const auto& w : file.warnings)
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
  print_warnings(warnings);
  std::cout << render_report(report, format);
  return 0;
}

int run_frontier(const FrontierArgs& args) {
  const ReportFormat format = parse_report_format(args.format);
  FrontierSection section;
  if (!args.file.empty()) {
    const ScenarioFile file = load_scenario_file(args.file);
    if (!file.portfolio) throw ValidationError("portfolio", "the scenario file has no portfolio section");
    const auto [first, second] = file.portfolio->select_pair(args.groups);
    section = make_frontier_section(two_group_inputs(file.portfolio->table, first, second), args.step,
                                    file.portfolio->groups[static_cast<std::size_t>(first)].id,
                                    file.portfolio->groups[static_cast<std::size_t>(second)].id);
  } else {
    if (!args.r1 || !args.r2 || !args.s1 || !args.s2 || !args.rho)
      throw ValidationError("frontier", "give --file or all of --r1 --r2 --s1 --s2 --rho");
    TwoGroupInputsd in;
    in.first = {*args.r1, *args.s1};
    in.second = {*args.r2, *args.s2};
    in.rho = *args.rho;
    section = make_frontier_section(in, args.step);
  }
  std::cout << render_frontier(section, format);
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  const ReportFormat format = parse_report_format(args.format);
  const ScenarioFile file = load_scenario_file(args.file);
  if (!file.portfolio) throw ValidationError("portfolio", "the scenario file has no portfolio section");
  if (args.draws < 1 || args.draws > kMaxSimulationDraws)
    throw ValidationError("draws", "must lie in [1, " + std::to_string(kMaxSimulationDraws) + "]");
  const auto [first, second] = file.portfolio->select_pair(args.groups);
  const SampleStatistics stats = simulate_groups(file.portfolio->table, first, second, args.draws, args.seed);
  std::cout << render_simulation(stats, format);
  return 0;
}

Server* g_server = nullptr;

extern "C" void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const ServeArgs& args) {
  ServerOptions options;
  options.host = args.host;
  options.port = args.port;
  options.store_dir = args.store;
  if (!args.static_dir.empty()) options.static_dir = args.static_dir;
  Server server(options);
  const int port = server.bind();
  std::cerr << "listening on http://" << args.host << ":" << port << " (store: " << args.store << ")\n";
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  server.run();
  g_server = nullptr;
  return 0;
}

void add_serve_options(CLI::App& app, ServeArgs& args) {
  app.add_option("--host", args.host, "Bind address")->capture_default_str();
  app.add_option("--port", args.port, "Port, 0 for any free port")->capture_default_str();
  app.add_option("--store", args.store, "Scenario store directory")->capture_default_str();
  app.add_option("--static", args.static_dir, "Directory of UI assets served under /");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trade credit policy valuation and receivables portfolio analysis"};
  app.require_subcommand(0, 1);

  bool serve_flag = false;
  ServeArgs serve_args;
  app.add_flag("--serve", serve_flag, "Run the HTTP service (same as the serve subcommand)");
  add_serve_options(app, serve_args);

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Compare a proposal scenario against a base scenario");
  evaluate->add_option("--file", eval_args.file, "Scenario file (.yaml, .yml or .json)")->required();
  evaluate->add_option("--base", eval_args.base, "Base scenario name (default: the file's base)");
  evaluate->add_option("--proposal", eval_args.proposal, "Proposal scenario name");
  evaluate->add_option("--format", eval_args.format, "text, json or csv")->capture_default_str();
  evaluate->add_flag("--lenient", eval_args.lenient, "Warn about unknown fields instead of failing");

  FrontierArgs frontier_args;
  auto* frontier_cmd = app.add_subcommand("frontier", "Two-group risk/return frontier");
  frontier_cmd->add_option("--file", frontier_args.file, "Scenario file with a portfolio section");
  frontier_cmd->add_option("--groups", frontier_args.groups, "Two group ids (default: first two)")->delimiter(',');
  frontier_cmd->add_option("--r1", frontier_args.r1, "Expected return of group 1");
  frontier_cmd->add_option("--r2", frontier_args.r2, "Expected return of group 2");
  frontier_cmd->add_option("--s1", frontier_args.s1, "Standard deviation of group 1");
  frontier_cmd->add_option("--s2", frontier_args.s2, "Standard deviation of group 2");
  frontier_cmd->add_option("--rho", frontier_args.rho, "Correlation of the two groups");
  frontier_cmd->add_option("--step", frontier_args.step, "Weight step in (0, 1]")->capture_default_str();
  frontier_cmd->add_option("--format", frontier_args.format, "text, csv or json")->capture_default_str();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the group statistics");
  simulate->add_option("--file", sim_args.file, "Scenario file with a portfolio section")->required();
  simulate->add_option("--groups", sim_args.groups, "Two group ids (default: first two)")->delimiter(',');
  simulate->add_option("--draws", sim_args.draws, "Number of draws")->capture_default_str();
  simulate->add_option("--seed", sim_args.seed, "Random seed")->capture_default_str();
  simulate->add_option("--format", sim_args.format, "text, csv or json")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_serve_options(*serve, serve_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*evaluate) return run_evaluate(eval_args);
    if (*frontier_cmd) return run_frontier(frontier_args);
    if (*simulate) return run_simulate(sim_args);
    if (*serve || serve_flag) return run_serve(serve_args);
    std::cerr << app.help();
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UndefinedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
