#include <cmath>
#include <random>

#include "doctest.h"
#include "generators.hpp"

#include "tradecredit/simulation.hpp"

using namespace tradecredit;
using doctest::Approx;

TEST_CASE("degenerate table has zero sample variance") {
  StateTabled t;
  t.probabilities = Eigen::VectorXd::Ones(1);
  t.returns = Eigen::MatrixXd::Constant(1, 2, 0.12);
  const auto s = simulate_groups(t, 0, 1, 1000, 3);
  CHECK(s.variance(0) == 0.0);
  CHECK(s.variance(1) == 0.0);
  CHECK(s.mean(0) == Approx(0.12));
  CHECK_FALSE(s.correlation.has_value());
}

TEST_CASE("fixed seed is reproducible, different seeds differ") {
  std::mt19937_64 rng(1);
  const auto t = gen::state_table(rng);
  const auto a = simulate_groups(t, 0, 1, 10'000, 77);
  const auto b = simulate_groups(t, 0, 1, 10'000, 77);
  const auto c = simulate_groups(t, 0, 1, 10'000, 78);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.correlation == b.correlation);
  CHECK(a.mean != c.mean);
}

TEST_CASE("sample statistics land near the analytic values") {
  std::mt19937_64 rng(2);
  const auto t = gen::state_table(rng);
  const auto s = simulate_groups(t, 0, 1, 200'000, 9);
  CHECK(std::abs(s.mean(0) - expected_return(t, 0)) < 4 * s.mean_se(0));
  CHECK(std::abs(s.variance(1) - variance(t, 1)) < 4 * s.variance_se(1));
  REQUIRE(s.correlation.has_value());
  CHECK(std::abs(*s.correlation - correlation(t, 0, 1)) < 4 * *s.correlation_se);
}

TEST_CASE("standard errors shrink by about sqrt(2) when draws double") {
  std::mt19937_64 rng(3);
  const auto t = gen::state_table(rng);
  const auto small = simulate_groups(t, 0, 1, 250'000, 11);
  const auto large = simulate_groups(t, 0, 1, 500'000, 11);
  CHECK(small.mean_se(0) / large.mean_se(0) == Approx(std::sqrt(2.0)).epsilon(0.05));
  CHECK(*small.correlation_se / *large.correlation_se == Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("simulation validates its inputs") {
  std::mt19937_64 rng(4);
  const auto t = gen::state_table(rng);
  CHECK_THROWS_AS(simulate_groups(t, 0, 1, 0, 1), ValidationError);
  CHECK_THROWS_AS(simulate_groups(t, 0, 2, 10, 1), ValidationError);
}
