#include "tradecredit/simulation.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace tradecredit {

SampleStatistics simulate_groups(const StateTabled& table, Eigen::Index first, Eigen::Index second,
                                 std::int64_t draws, std::uint64_t seed) {
  validate(table);
  detail::require_column(table, first);
  detail::require_column(table, second);
  if (draws < 1) throw ValidationError("draws", "must be at least 1");

  // A draw is fully described by its state index, so the sample reduces to
  // per-state hit counts.
  std::mt19937_64 rng(seed);
  std::discrete_distribution<Eigen::Index> pick(table.probabilities.data(),
                                                table.probabilities.data() + table.states());
  std::vector<std::int64_t> hits(static_cast<std::size_t>(table.states()), 0);
  for (std::int64_t d = 0; d < draws; ++d) ++hits[static_cast<std::size_t>(pick(rng))];

  const auto n = static_cast<double>(draws);
  Eigen::VectorXd freq(table.states());
  for (Eigen::Index i = 0; i < table.states(); ++i) freq(i) = static_cast<double>(hits[static_cast<std::size_t>(i)]) / n;

  const Eigen::VectorXd x = table.returns.col(first);
  const Eigen::VectorXd y = table.returns.col(second);

  SampleStatistics out;
  out.draws = draws;
  out.seed = seed;

  double mx = 0, my = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    mx += freq(i) * x(i);
    my += freq(i) * y(i);
  }
  double vx = 0, vy = 0, cxy = 0, m4x = 0, m4y = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double dx = x(i) - mx;
    const double dy = y(i) - my;
    vx += freq(i) * dx * dx;
    vy += freq(i) * dy * dy;
    cxy += freq(i) * dx * dy;
    m4x += freq(i) * dx * dx * dx * dx;
    m4y += freq(i) * dy * dy * dy * dy;
  }
  out.mean << mx, my;
  out.variance << vx, vy;
  out.mean_se << std::sqrt(vx / n), std::sqrt(vy / n);
  out.variance_se << std::sqrt(std::max(m4x - vx * vx, 0.0) / n), std::sqrt(std::max(m4y - vy * vy, 0.0) / n);

  if (vx > 0 && vy > 0) {
    const double sx = std::sqrt(vx);
    const double sy = std::sqrt(vy);
    const double r = cxy / (sx * sy);
    out.correlation = r;
    // delta-method influence function of the sample correlation
    double influence_var = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double zx = (x(i) - mx) / sx;
      const double zy = (y(i) - my) / sy;
      const double infl = zx * zy - 0.5 * r * (zx * zx + zy * zy);
      influence_var += freq(i) * infl * infl;
    }
    out.correlation_se = std::sqrt(influence_var / n);
  }
  return out;
}

}  // namespace tradecredit
