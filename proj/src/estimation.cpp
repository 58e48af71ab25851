#include "mfbm/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "mfbm/errors.hpp"
#include "mfbm/paths.hpp"

namespace mfbm {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct MidColumn {
  Eigen::VectorXd weights;  // g(mid_i, T)
  double denom = 0.0;       // sum_i g(mid_i,T) dt = int_0^T g(s,T) ds
};

MidColumn midpoint_column(double H, double T, std::size_t n) {
  MidColumn col;
  col.weights.resize(static_cast<Eigen::Index>(n));
  const double dt = T / static_cast<double>(n);
  if (H == 0.5) {
    col.weights.setConstant(0.5);
  } else {
    const GColumn g = solve_g(H, T, 2 * n);  // node resolution 2n: nodes at midpoints
    for (std::size_t i = 0; i < n; ++i) {
      col.weights(static_cast<Eigen::Index>(i)) = g.values[2 * i + 1];
    }
  }
  col.denom = col.weights.sum() * dt;
  return col;
}

double estimate_one(const Eigen::VectorXd& weights, double denom,
                    const Eigen::VectorXd& Y) {
  const auto n = weights.size();
  double num = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) num += weights(i) * (Y(i + 1) - Y(i));
  return num / denom;
}

}  // namespace

EstimatorReport mle_theta(const KernelFamily& family, const Eigen::VectorXd& Y) {
  const Grid& grid = family.grid();
  if (Y.size() != static_cast<Eigen::Index>(grid.n + 1)) {
    throw std::invalid_argument("mle_theta: path length does not match the family grid");
  }
  const double denom = family.bracket(grid.n);
  if (!(denom > 0.0)) throw SolverError("mle_theta: nonpositive int g(s,T) ds");
  double num = 0.0;
  const double dt = grid.dt();
  for (std::size_t i = 0; i < grid.n; ++i) {
    num += family.g_at(grid.n, (static_cast<double>(i) + 0.5) * dt) *
           (Y(static_cast<Eigen::Index>(i + 1)) - Y(static_cast<Eigen::Index>(i)));
  }
  EstimatorReport rep;
  rep.theta_hat = num / denom;
  rep.exact_variance = 1.0 / denom;
  const double half = kZ95 * std::sqrt(rep.exact_variance);
  rep.ci95 = {rep.theta_hat - half, rep.theta_hat + half};
  rep.T = grid.t_end;
  rep.H = family.params().H;
  rep.n = grid.n;
  return rep;
}

double asymptotic_variance(double H) {
  if (!(H > 0.0) || !(H < 1.0)) {
    throw std::domain_error("asymptotic_variance: H outside (0,1)");
  }
  if (H > 0.5) return constants(H).lambda_H;
  return 1.0;
}

MonteCarloReport monte_carlo_mle(double H, double theta, double T, std::size_t n,
                                 std::size_t n_reps, std::uint64_t seed) {
  if (n_reps < 100) throw std::invalid_argument("monte_carlo_mle: n_reps >= 100");
  const Grid grid = Grid::uniform(n, T);
  const MidColumn col = midpoint_column(H, T, n);
  if (!(col.denom > 0.0)) throw SolverError("monte_carlo_mle: nonpositive int g");

  const PathSample sample = simulate(H, grid, n_reps, seed, theta);
  const auto m = static_cast<Eigen::Index>(n_reps);
  Eigen::VectorXd est(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    est(r) = estimate_one(col.weights, col.denom, sample.Y.row(r).transpose());
  }
  const double mean = est.mean();
  const double var =
      (est.array() - mean).square().sum() / static_cast<double>(n_reps - 1);

  MonteCarloReport rep;
  rep.H = H;
  rep.theta = theta;
  rep.T = T;
  rep.n = n;
  rep.n_reps = n_reps;
  rep.seed = seed;
  rep.bias = mean - theta;
  rep.bias_se = std::sqrt(var / static_cast<double>(n_reps));
  rep.empirical_variance = var;
  rep.empirical_variance_se = var * std::sqrt(2.0 / static_cast<double>(n_reps - 1));
  rep.theoretical_variance = 1.0 / col.denom;
  const double scale = (H > 0.5) ? std::pow(T, 2.0 - 2.0 * H) : T;
  rep.scaled_variance = scale * rep.theoretical_variance;
  rep.asymptotic_constant = asymptotic_variance(H);
  return rep;
}

}  // namespace mfbm
