#pragma once

// Return and risk statistics for homogeneous purchaser groups, and the
// two-group risk/return frontier.
//
// Groups share one discrete state space: a StateTable holds the state
// probabilities and one column of returns per group.

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "tradecredit/errors.hpp"

namespace tradecredit {

template <typename Scalar>
struct StateTable {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector probabilities;  // one per state
  Matrix returns;        // states x groups

  Eigen::Index states() const { return probabilities.size(); }
  Eigen::Index groups() const { return returns.cols(); }
};
using StateTabled = StateTable<double>;

/// Identifies a group by its column in a StateTable.
struct ReceivableGroup {
  std::string id;
  std::string label;
  Eigen::Index column = 0;
};

template <typename Scalar>
void validate(const StateTable<Scalar>& table, Scalar tolerance = Scalar(1e-9)) {
  using std::abs;
  using std::isfinite;
  if (table.states() == 0) throw ValidationError("states", "at least one state is required");
  if (table.returns.rows() != table.states())
    throw ValidationError("states", "every state needs one return per group");
  if (table.groups() == 0) throw ValidationError("groups", "at least one group is required");
  for (Eigen::Index i = 0; i < table.states(); ++i) {
    const Scalar p = table.probabilities(i);
    if (!isfinite(p) || p < Scalar(0))
      throw ValidationError("states[" + std::to_string(i) + "].p", "must be a non-negative probability");
  }
  if (!table.returns.allFinite()) throw ValidationError("states", "returns must be finite");
  if (abs(table.probabilities.sum() - Scalar(1)) > tolerance)
    throw ValidationError("states", "probabilities must sum to 1");
}

namespace detail {

template <typename Scalar>
void require_column(const StateTable<Scalar>& table, Eigen::Index column) {
  if (column < 0 || column >= table.groups())
    throw ValidationError("group", "column " + std::to_string(column) + " is outside the state table");
}

}  // namespace detail

/// Profit rate of extending credit to a group: (dCR - dCosts) / dCosts.
template <typename Scalar>
Scalar profit_rate(Scalar delta_cr, Scalar delta_costs) {
  if (delta_costs == Scalar(0)) throw UndefinedError("profit rate is undefined when cost growth is zero");
  return (delta_cr - delta_costs) / delta_costs;
}

template <typename Scalar>
Scalar expected_return(const StateTable<Scalar>& table, Eigen::Index column) {
  validate(table);
  detail::require_column(table, column);
  return table.probabilities.dot(table.returns.col(column));
}

/// Probability-weighted covariance of two group columns.
template <typename Scalar>
Scalar covariance(const StateTable<Scalar>& table, Eigen::Index first, Eigen::Index second) {
  validate(table);
  detail::require_column(table, first);
  detail::require_column(table, second);
  const auto& p = table.probabilities;
  const auto dev1 = (table.returns.col(first).array() - p.dot(table.returns.col(first))).eval();
  const auto dev2 = (table.returns.col(second).array() - p.dot(table.returns.col(second))).eval();
  return (p.array() * dev1 * dev2).sum();
}

template <typename Scalar>
Scalar variance(const StateTable<Scalar>& table, Eigen::Index column) {
  return covariance(table, column, column);
}

template <typename Scalar>
Scalar std_dev(const StateTable<Scalar>& table, Eigen::Index column) {
  using std::sqrt;
  return sqrt(variance(table, column));
}

/// Correlation of two groups. Throws UndefinedError when either group has
/// zero dispersion.
template <typename Scalar>
Scalar correlation(const StateTable<Scalar>& table, Eigen::Index first, Eigen::Index second) {
  const Scalar s1 = std_dev(table, first);
  const Scalar s2 = std_dev(table, second);
  if (s1 == Scalar(0) || s2 == Scalar(0))
    throw UndefinedError("correlation is undefined for a group with zero standard deviation");
  return covariance(table, first, second) / (s1 * s2);
}

/// Summary of one group as it enters the two-group frontier.
template <typename Scalar>
struct GroupMoments {
  Scalar expected_return{0};
  Scalar risk{0};
};

template <typename Scalar>
struct FrontierPoint {
  Scalar weight{0};  // share of group 1
  Scalar expected_return{0};
  Scalar risk{0};

  friend bool operator==(const FrontierPoint&, const FrontierPoint&) = default;
};
using FrontierPointd = FrontierPoint<double>;

/// Inputs of a two-group portfolio.
template <typename Scalar>
struct TwoGroupInputs {
  GroupMoments<Scalar> first;
  GroupMoments<Scalar> second;
  Scalar rho{0};
};
using TwoGroupInputsd = TwoGroupInputs<double>;

template <typename Scalar>
void validate(const TwoGroupInputs<Scalar>& in) {
  using std::isfinite;
  if (!isfinite(in.first.expected_return) || !isfinite(in.second.expected_return))
    throw ValidationError("r", "expected returns must be finite");
  if (!isfinite(in.first.risk) || in.first.risk < Scalar(0)) throw ValidationError("s1", "must be non-negative");
  if (!isfinite(in.second.risk) || in.second.risk < Scalar(0)) throw ValidationError("s2", "must be non-negative");
  if (!isfinite(in.rho) || in.rho < Scalar(-1) || in.rho > Scalar(1))
    throw ValidationError("rho", "must lie in [-1, 1]");
}

/// Expected return and risk of holding `weight` of group 1 and the rest in
/// group 2.
///
/// The variance is evaluated as a perfect square plus a correction that
/// vanishes at rho = +1 (rho >= 0) or rho = -1 (rho < 0), so the straight
/// and the zero-risk geometries come out exact.
template <typename Scalar>
FrontierPoint<Scalar> portfolio_stats(Scalar weight, const TwoGroupInputs<Scalar>& in) {
  using std::sqrt;
  validate(in);
  if (!(weight >= Scalar(0) && weight <= Scalar(1))) throw ValidationError("w1", "must lie in [0, 1]");
  const Scalar a = weight * in.first.risk;
  const Scalar b = (Scalar(1) - weight) * in.second.risk;
  Scalar var;
  if (in.rho >= Scalar(0))
    var = (a + b) * (a + b) - Scalar(2) * (Scalar(1) - in.rho) * a * b;
  else
    var = (a - b) * (a - b) + Scalar(2) * (Scalar(1) + in.rho) * a * b;
  FrontierPoint<Scalar> p;
  p.weight = weight;
  p.expected_return = weight * in.first.expected_return + (Scalar(1) - weight) * in.second.expected_return;
  p.risk = sqrt(std::max(var, Scalar(0)));
  return p;
}

/// Group-1 weight in [0, 1] minimising portfolio risk.
template <typename Scalar>
Scalar min_risk_weight(const TwoGroupInputs<Scalar>& in) {
  validate(in);
  const Scalar s1 = in.first.risk;
  const Scalar s2 = in.second.risk;
  const Scalar denom = s1 * s1 + s2 * s2 - Scalar(2) * in.rho * s1 * s2;
  if (denom <= Scalar(0)) return Scalar(0);  // identical risk profiles: any weight works
  return std::clamp((s2 * s2 - in.rho * s1 * s2) / denom, Scalar(0), Scalar(1));
}

inline constexpr double kDefaultFrontierStep = 0.01;

/// Samples the frontier at weights 0, step, 2 step, ..., always ending at 1.
template <typename Scalar>
std::vector<FrontierPoint<Scalar>> frontier(const TwoGroupInputs<Scalar>& in, Scalar step = Scalar(kDefaultFrontierStep)) {
  using std::floor;
  using std::isfinite;
  if (!isfinite(step) || step <= Scalar(0) || step > Scalar(1)) throw ValidationError("step", "must lie in (0, 1]");
  validate(in);
  const Scalar slack(1e-9);
  const auto steps = static_cast<long long>(floor(Scalar(1) / step + slack));
  std::vector<FrontierPoint<Scalar>> points;
  points.reserve(static_cast<std::size_t>(steps) + 2);
  for (long long i = 0; i <= steps; ++i) {
    Scalar w = std::min(Scalar(i) * step, Scalar(1));
    if (Scalar(1) - w < Scalar(1e-12)) w = Scalar(1);
    points.push_back(portfolio_stats(w, in));
  }
  if (points.back().weight < Scalar(1)) points.push_back(portfolio_stats(Scalar(1), in));
  return points;
}

/// Non-dominated points, sorted by risk with strictly increasing return.
/// P dominates Q when it is no riskier and no less profitable, and strictly
/// better in one of the two. Exact ties keep the smaller weight.
template <typename Scalar>
std::vector<FrontierPoint<Scalar>> efficient_subset(std::vector<FrontierPoint<Scalar>> points) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return std::tuple(a.risk, -a.expected_return, a.weight) < std::tuple(b.risk, -b.expected_return, b.weight);
  });
  std::vector<FrontierPoint<Scalar>> kept;
  for (const auto& p : points) {
    if (kept.empty() || p.expected_return > kept.back().expected_return) kept.push_back(p);
  }
  return kept;
}

template <typename Scalar>
bool is_efficient(const FrontierPoint<Scalar>& p, const std::vector<FrontierPoint<Scalar>>& efficient) {
  return std::find(efficient.begin(), efficient.end(), p) != efficient.end();
}

/// Frontier inputs for two columns of a state table.
template <typename Scalar>
TwoGroupInputs<Scalar> two_group_inputs(const StateTable<Scalar>& table, Eigen::Index first, Eigen::Index second) {
  TwoGroupInputs<Scalar> in;
  in.first = {expected_return(table, first), std_dev(table, first)};
  in.second = {expected_return(table, second), std_dev(table, second)};
  in.rho = correlation(table, first, second);
  // rounding can push a perfectly (anti)correlated pair a hair outside [-1, 1]
  in.rho = std::clamp(in.rho, Scalar(-1), Scalar(1));
  return in;
}

}  // namespace tradecredit
