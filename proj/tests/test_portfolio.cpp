#include <algorithm>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

#include "tradecredit/portfolio.hpp"

using namespace tradecredit;
using doctest::Approx;

namespace {

StateTabled table(std::initializer_list<double> p, std::initializer_list<std::initializer_list<double>> rows) {
  StateTabled t;
  t.probabilities = Eigen::Map<const Eigen::VectorXd>(p.begin(), static_cast<Eigen::Index>(p.size()));
  t.returns.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double r : row) t.returns(i, j++) = r;
    ++i;
  }
  return t;
}

TwoGroupInputsd inputs(double r1, double s1, double r2, double s2, double rho) { return {{r1, s1}, {r2, s2}, rho}; }

}  // namespace

TEST_CASE("profit rate") {
  CHECK(profit_rate(120.0, 100.0) == Approx(0.20));
  CHECK(profit_rate(100.0, 100.0) == 0.0);
  CHECK_THROWS_AS(profit_rate(5.0, 0.0), UndefinedError);
}

TEST_CASE("moments of simple distributions") {
  const auto degenerate = table({1.0}, {{0.1}});
  CHECK(expected_return(degenerate, 0) == Approx(0.1));
  CHECK(variance(degenerate, 0) == 0.0);
  CHECK(std_dev(degenerate, 0) == 0.0);

  const auto two_point = table({0.5, 0.5}, {{0.1}, {0.2}});
  CHECK(expected_return(two_point, 0) == Approx(0.15));
  CHECK(variance(two_point, 0) == Approx(0.0025));
  CHECK(std_dev(two_point, 0) == Approx(0.05));
}

TEST_CASE("state table validation") {
  CHECK_THROWS_AS(expected_return(StateTabled{}, 0), ValidationError);
  CHECK_THROWS_AS(expected_return(table({0.5, 0.4}, {{0.1}, {0.2}}), 0), ValidationError);
  CHECK_THROWS_AS(expected_return(table({1.2, -0.2}, {{0.1}, {0.2}}), 0), ValidationError);
  CHECK_THROWS_AS(expected_return(table({0.5, 0.5}, {{0.1}, {0.2}}), 1), ValidationError);
}

TEST_CASE("correlation of a hand-built four-state table matches enumeration") {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const std::vector<double> x{0.05, 0.25, -0.10, 0.12};
  const std::vector<double> y{0.20, -0.05, 0.15, 0.02};
  const auto t = table({0.1, 0.2, 0.3, 0.4}, {{0.05, 0.20}, {0.25, -0.05}, {-0.10, 0.15}, {0.12, 0.02}});
  const auto e = oracle::enumerate(p, x, y);
  CHECK(expected_return(t, 0) == Approx(e.mean1).epsilon(1e-14));
  CHECK(variance(t, 1) == Approx(e.var2).epsilon(1e-14));
  CHECK(covariance(t, 0, 1) == Approx(e.cov).epsilon(1e-13));
  CHECK(correlation(t, 0, 1) == Approx(e.rho()).epsilon(1e-13));
  CHECK(correlation(t, 0, 1) < 0);
}

TEST_CASE("correlation identities and bounds on random tables") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> shift(-1, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    StateTabled t = gen::state_table(rng, 3);
    const double c = shift(rng);
    t.returns.col(2) = c - t.returns.col(0).array();
    CHECK(std::abs(correlation(t, 0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(correlation(t, 0, 2) + 1.0) <= 1e-12);
    CHECK(std::abs(correlation(t, 0, 1)) <= 1.0 + 1e-12);
    CHECK(correlation(t, 0, 1) == Approx(correlation(t, 1, 0)).epsilon(1e-14));
    CHECK(std_dev(t, 1) * std_dev(t, 1) == Approx(variance(t, 1)).epsilon(1e-12));
  }
}

TEST_CASE("correlation with a zero-dispersion group is undefined") {
  const auto t = table({0.5, 0.5}, {{0.1, 0.3}, {0.2, 0.3}});
  CHECK_THROWS_AS(correlation(t, 0, 1), UndefinedError);
}

TEST_CASE("portfolio stats at perfect positive correlation are affine") {
  for (double w : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const auto p = portfolio_stats(w, inputs(0.2, 0.1, 0.1, 0.05, 1.0));
    CHECK(p.risk == Approx(w * 0.1 + (1 - w) * 0.05).epsilon(1e-14));
    CHECK(p.expected_return == Approx(w * 0.2 + (1 - w) * 0.1).epsilon(1e-14));
  }
}

TEST_CASE("portfolio stats at perfect negative correlation reach zero risk") {
  const double s1 = 0.3, s2 = 0.1;
  const auto p = portfolio_stats(s2 / (s1 + s2), inputs(0.2, s1, 0.1, s2, -1.0));
  CHECK(std::abs(p.risk) < 1e-12);
}

TEST_CASE("portfolio stats agree with the textbook expansion") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s(0, 0.5), rho(-1, 1), w(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double s1 = s(rng), s2 = s(rng), r = rho(rng), weight = w(rng);
    const auto p = portfolio_stats(weight, inputs(0.1, s1, 0.05, s2, r));
    CHECK(p.risk == Approx(oracle::two_asset_risk(weight, s1, s2, r)).epsilon(1e-9));
  }
}

TEST_CASE("portfolio stats validation") {
  CHECK_THROWS_AS(portfolio_stats(0.5, inputs(0.1, 0.1, 0.1, 0.1, 1.5)), ValidationError);
  CHECK_THROWS_AS(portfolio_stats(1.5, inputs(0.1, 0.1, 0.1, 0.1, 0.5)), ValidationError);
  CHECK_THROWS_AS(portfolio_stats(0.5, inputs(0.1, -0.1, 0.1, 0.1, 0.5)), ValidationError);
}

TEST_CASE("minimum-risk weight at zero correlation") {
  const auto in = inputs(0.2, 0.2, 0.1, 0.1, 0.0);
  CHECK(min_risk_weight(in) == Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(oracle::grid_min_risk_weight(0.2, 0.1, 0.0, 1e-4) - 0.2) <= 1e-4);
}

TEST_CASE("minimum risk below both groups iff rho < min(s)/max(s)") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> s(0.01, 0.5), rho(-0.999, 0.999);
  for (int i = 0; i < 1000; ++i) {
    const double s1 = s(rng), s2 = s(rng), r = rho(rng);
    const auto in = inputs(0.1, s1, 0.05, s2, r);
    const double threshold = std::min(s1, s2) / std::max(s1, s2);
    if (std::abs(r - threshold) < 1e-6) continue;
    const double min_risk = portfolio_stats(min_risk_weight(in), in).risk;
    CHECK((min_risk < std::min(s1, s2) - 1e-12) == (r < threshold));
    CHECK(portfolio_stats(0.5, in).risk < std::max(s1, s2));
  }
}

TEST_CASE("frontier sampling") {
  const auto in = inputs(0.2, 0.1, 0.1, 0.05, 0.3);
  const auto three = frontier(in, 0.5);
  REQUIRE(three.size() == 3);
  CHECK(three[0].weight == 0.0);
  CHECK(three[1].weight == 0.5);
  CHECK(three[2].weight == 1.0);
  CHECK(three[0].expected_return == Approx(0.1));
  CHECK(three[0].risk == Approx(0.05));
  CHECK(three[2].expected_return == Approx(0.2));
  CHECK(three[2].risk == Approx(0.1));

  CHECK(frontier(in).size() == 101);
  const auto uneven = frontier(in, 0.3);
  REQUIRE(uneven.size() == 5);
  CHECK(uneven.back().weight == 1.0);
  CHECK(frontier(in, 1.0).size() == 2);

  CHECK_THROWS_AS(frontier(in, 0.0), ValidationError);
  CHECK_THROWS_AS(frontier(in, 1.5), ValidationError);
}

TEST_CASE("perfect hedge frontier dips below both groups") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> s(0.01, 0.5);
  for (int i = 0; i < 200; ++i) {
    const auto in = inputs(0.2, s(rng), 0.1, s(rng), -1.0);
    const auto pts = frontier(in);
    const double lowest = std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.risk < b.risk; })->risk;
    CHECK(lowest < std::min(in.first.risk, in.second.risk));
  }
}

namespace {

// O(n^2) dominance check.
std::vector<FrontierPointd> brute_force_efficient(const std::vector<FrontierPointd>& pts) {
  std::vector<FrontierPointd> out;
  for (const auto& q : pts) {
    bool dominated = false;
    for (const auto& p : pts) {
      const bool weakly = p.risk <= q.risk && p.expected_return >= q.expected_return;
      const bool strictly = p.risk < q.risk || p.expected_return > q.expected_return;
      if (weakly && strictly) dominated = true;
    }
    if (!dominated) out.push_back(q);
  }
  return out;
}

}  // namespace

TEST_CASE("efficient subset at perfect positive correlation keeps the whole segment") {
  const auto pts = frontier(inputs(0.2, 0.1, 0.1, 0.05, 1.0));
  const auto eff = efficient_subset(pts);
  CHECK(eff.size() == pts.size());
  CHECK(brute_force_efficient(pts).size() == pts.size());
}

TEST_CASE("efficient subset at perfect negative correlation drops the inferior side") {
  // zero-risk weight 0.1 / (0.3 + 0.1) = 0.25 lies on the grid
  const auto in = inputs(0.2, 0.3, 0.1, 0.1, -1.0);
  const auto pts = frontier(in);
  const auto eff = efficient_subset(pts);
  for (const auto& p : pts) {
    const bool kept = is_efficient(p, eff);
    CHECK(kept == (p.weight >= 0.25 - 1e-12));
  }
}

TEST_CASE("efficient subset matches brute force, is idempotent and order independent") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> s(0.01, 0.5), r(-0.1, 0.3), rho(-1, 1);
  for (int i = 0; i < 200; ++i) {
    auto pts = frontier(inputs(r(rng), s(rng), r(rng), s(rng), rho(rng)), 0.05);
    const auto eff = efficient_subset(pts);
    auto brute = brute_force_efficient(pts);
    CHECK(eff.size() == brute.size());
    for (const auto& p : brute) CHECK(is_efficient(p, eff));
    CHECK(efficient_subset(eff) == eff);
    std::shuffle(pts.begin(), pts.end(), rng);
    CHECK(efficient_subset(pts) == eff);
    for (std::size_t k = 1; k < eff.size(); ++k) {
      CHECK(eff[k].risk >= eff[k - 1].risk);
      CHECK(eff[k].expected_return > eff[k - 1].expected_return);
    }
  }
}

TEST_CASE("efficient subset of one point and of exact ties") {
  const std::vector<FrontierPointd> one{{0.3, 0.1, 0.2}};
  CHECK(efficient_subset(one) == one);
  const std::vector<FrontierPointd> ties{{0.7, 0.1, 0.2}, {0.3, 0.1, 0.2}};
  const auto kept = efficient_subset(ties);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].weight == 0.3);
}

TEST_CASE("two-group inputs from a state table") {
  const auto t = table({0.25, 0.25, 0.25, 0.25}, {{0.30, 0.05}, {0.30, 0.05}, {0.10, 0.15}, {0.10, 0.15}});
  const auto in = two_group_inputs(t, 0, 1);
  CHECK(in.first.expected_return == Approx(0.2));
  CHECK(in.first.risk == Approx(0.1));
  CHECK(in.second.risk == Approx(0.05));
  CHECK(in.rho == Approx(-1.0));
  CHECK(in.rho >= -1.0);
}
