#pragma once

// Seeded Monte Carlo sampling of a shared state table. Serves as an
// independent stochastic check on the analytic group statistics.

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "tradecredit/portfolio.hpp"

namespace tradecredit {

struct SampleStatistics {
  std::int64_t draws = 0;
  std::uint64_t seed = 0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d variance = Eigen::Vector2d::Zero();
  std::optional<double> correlation;  // empty when either sample variance is zero

  // Asymptotic standard errors of the estimates above.
  Eigen::Vector2d mean_se = Eigen::Vector2d::Zero();
  Eigen::Vector2d variance_se = Eigen::Vector2d::Zero();
  std::optional<double> correlation_se;
};

/// Draws `draws` i.i.d. states from `table` and reports the sample moments of
/// columns `first` and `second`. Output depends only on the inputs and `seed`.
SampleStatistics simulate_groups(const StateTabled& table, Eigen::Index first, Eigen::Index second,
                                 std::int64_t draws, std::uint64_t seed);

}  // namespace tradecredit
