#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "json.hpp"

using nlohmann::json;

namespace {

const std::string kCli = TCREDIT_CLI;
const std::filesystem::path kScenarios = TCREDIT_SCENARIO_DIR;

testutil::Command cli(const std::string& args, bool with_stderr = false) {
  return testutil::run("'" + kCli + "' " + args + (with_stderr ? " 2>&1" : " 2>/dev/null"));
}

std::string scenario(const std::string& name) { return "'" + (kScenarios / name).string() + "'"; }

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "tradecredit-tests";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / name) << text;
  return dir / name;
}

struct Row {
  double w1, r_p, s_p;
  bool efficient;
};

std::vector<Row> parse_frontier_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "w1,R_p,s_p,efficient");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    Row r{};
    int e = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &r.w1, &r.r_p, &r.s_p, &e) == 4);
    r.efficient = e == 1;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("evaluate example 1") {
  const auto text = cli("evaluate --file " + scenario("example1.yaml"));
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("75 023 598") != std::string::npos);

  const auto j = cli("evaluate --file " + scenario("example1.yaml") + " --format json");
  REQUIRE(j.exit_code == 0);
  const auto report = json::parse(j.out);
  CHECK(std::abs(report["incremental"]["delta_eva"].get<double>() - 36'283'333) <= 1);
  CHECK(report["proposal"] == "liberal");
}

TEST_CASE("evaluate example 3 warns on stderr") {
  const auto r = cli("evaluate --file " + scenario("example3.yaml") + " --proposal portfolio --format csv", true);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("warning: ") != std::string::npos);
  CHECK(r.out.find("0.9") != std::string::npos);
  const auto quiet = cli("evaluate --file " + scenario("example3.yaml") + " --proposal portfolio --format csv");
  CHECK(quiet.out.rfind("metric,value", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(cli("evaluate --file /nonexistent/file.yaml").exit_code == 2);

  const auto unknown = cli("evaluate --file " + scenario("example1.yaml") + " --proposal nosuch", true);
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.out.find("nosuch") != std::string::npos);

  const auto yaml = write_temp("broken.yaml", "firm: {wacc: 0.15\nbase: [\n");
  CHECK(cli("evaluate --file '" + yaml.string() + "'").exit_code == 3);

  std::ifstream in(kScenarios / "example1.yaml");
  std::stringstream text;
  text << in.rdbuf();
  std::string bad_terms = text.str();
  bad_terms.replace(bad_terms.find("\"3/10, net 40\""), 14, "\"3/10, 40 net\"");
  CHECK(cli("evaluate --file '" + write_temp("bad-terms.yaml", bad_terms).string() + "'").exit_code == 3);

  std::string bad_value = text.str();
  bad_value.replace(bad_value.find("wacc: 0.15"), 10, "wacc: -0.1");
  const auto neg = cli("evaluate --file '" + write_temp("bad-wacc.yaml", bad_value).string() + "'", true);
  CHECK(neg.exit_code == 1);
  CHECK(neg.out.find("firm.wacc") != std::string::npos);

  CHECK(cli("evaluate").exit_code == 1);
  CHECK(cli("evaluate --file " + scenario("example1.yaml") + " --format xml").exit_code == 1);
  CHECK(cli("frontier --r1 0.1").exit_code == 1);
}

TEST_CASE("frontier with perfectly negative correlation reaches zero risk") {
  const auto r = cli("frontier --r1 0.2 --r2 0.1 --s1 0.1 --s2 0.05 --rho -1 --step 0.0001 --format csv");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_frontier_csv(r.out);
  CHECK(rows.size() == 10001);
  double best = 1;
  for (const auto& row : rows) best = std::min(best, row.s_p);
  CHECK(best < 1e-3);
}

TEST_CASE("frontier with zero correlation has its minimum at s2^2/(s1^2+s2^2)") {
  const auto r = cli("frontier --r1 0.2 --r2 0.1 --s1 0.2 --s2 0.1 --rho 0 --format csv");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_frontier_csv(r.out);
  const auto best = std::min_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.s_p < b.s_p; });
  CHECK(best->w1 == doctest::Approx(0.20));
  for (const auto& row : rows) CHECK(row.efficient == (row.w1 >= 0.20 - 1e-12));
}

TEST_CASE("frontier with perfect correlation is a straight line") {
  const auto r = cli("frontier --r1 0.2 --r2 0.1 --s1 0.1 --s2 0.05 --rho 1 --format csv");
  REQUIRE(r.exit_code == 0);
  for (const auto& row : parse_frontier_csv(r.out)) {
    CHECK(std::abs(row.r_p - (0.1 + 0.1 * row.w1)) < 1e-12);
    CHECK(std::abs(row.s_p - (0.05 + 0.05 * row.w1)) < 1e-12);
  }
}

TEST_CASE("frontier from a file selects groups by id") {
  const auto r = cli("frontier --file " + scenario("example2-frontiers.yaml") + " --groups A,B_neg --format json");
  REQUIRE(r.exit_code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["min_risk"]["s_p"].get<double>()) < 1e-12);
  CHECK(cli("frontier --file " + scenario("example1.yaml")).exit_code == 1);
}

TEST_CASE("simulate is reproducible") {
  const std::string args = "simulate --file " + scenario("example3.yaml") + " --draws 50000 --seed 5 --format json";
  const auto a = cli(args);
  const auto b = cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["draws"] == 50000);
  CHECK(cli("simulate --file " + scenario("example3.yaml") + " --draws 0").exit_code == 1);
}
