#include <doctest.h>

#include <cmath>

#include "mfbm/estimation.hpp"
#include "mfbm/kernel_family.hpp"

using namespace mfbm;

TEST_CASE("noiseless observation recovers theta exactly") {
  const std::size_t n = 64;
  const KernelFamily fam = solve_g_family(0.7, 1.0, n, FamilyOptions{false, 0, 3.0});
  Eigen::VectorXd Y(n + 1);
  const double theta = 2.5;
  for (std::size_t i = 0; i <= n; ++i) Y(static_cast<Eigen::Index>(i)) = theta * fam.grid().nodes[i];
  const EstimatorReport rep = mle_theta(fam, Y);
  CHECK(rep.theta_hat == doctest::Approx(theta).epsilon(1e-12));
  CHECK(rep.ci95[0] < theta);
  CHECK(rep.ci95[1] > theta);
  CHECK(rep.ci95[1] - rep.theta_hat == doctest::Approx(rep.theta_hat - rep.ci95[0]));
}

TEST_CASE("H = 1/2, T = 4: exact variance is 1/2") {
  const KernelFamily fam = solve_g_family(0.5, 4.0, 64);
  const Eigen::VectorXd Y = Eigen::VectorXd::Zero(65);
  const EstimatorReport rep = mle_theta(fam, Y);
  CHECK(rep.exact_variance == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("exact variance is definitionally 1/bracket") {
  const std::size_t n = 512;
  const KernelFamily fam = solve_g_family(0.7, 1.0, n, FamilyOptions{false, 0, 3.0});
  const Eigen::VectorXd Y = Eigen::VectorXd::Zero(n + 1);
  const EstimatorReport rep = mle_theta(fam, Y);
  CHECK(std::abs(rep.exact_variance - 1.0 / fam.bracket(n)) <= 1e-10);
}

TEST_CASE("asymptotic variance constants") {
  CHECK(asymptotic_variance(0.5) == 1.0);
  CHECK(asymptotic_variance(0.3) == 1.0);
  CHECK(asymptotic_variance(0.75) == doctest::Approx(0.98327158285954493).epsilon(1e-12));
}

TEST_CASE("monte carlo: unbiased and calibrated at (0.7, T=1)") {
  const MonteCarloReport rep = monte_carlo_mle(0.7, 1.0, 1.0, 256, 2000, 7);
  CHECK(std::abs(rep.bias) <= 3.0 * rep.bias_se);
  CHECK(std::abs(rep.empirical_variance - rep.theoretical_variance) <=
        3.0 * rep.empirical_variance_se);
}

TEST_CASE("monte carlo: calibrated at (0.3, T=1)") {
  const MonteCarloReport rep = monte_carlo_mle(0.3, 1.0, 1.0, 256, 2000, 11);
  CHECK(std::abs(rep.bias) <= 3.0 * rep.bias_se);
  CHECK(std::abs(rep.empirical_variance - rep.theoretical_variance) <=
        3.0 * rep.empirical_variance_se);
}

TEST_CASE("scaled exact variance decreases towards its limit, H = 0.7") {
  std::vector<double> scaled;
  for (double T : {1.0, 4.0, 16.0}) {
    const MonteCarloReport rep = monte_carlo_mle(0.7, 1.0, T, 128, 100, 3);
    scaled.push_back(rep.scaled_variance);
    CHECK(rep.asymptotic_constant == doctest::Approx(0.98653813492128811).epsilon(1e-12));
  }
  CHECK(scaled[0] > scaled[1]);
  CHECK(scaled[1] > scaled[2]);
  CHECK(scaled[2] > asymptotic_variance(0.7));  // approach from above
}

TEST_CASE("consistency proxy: exact variance vanishes along growing T") {
  double prev = 1e300;
  for (double T : {1.0, 4.0, 16.0}) {
    const MonteCarloReport rep = monte_carlo_mle(0.3, 0.0, T, 128, 100, 5);
    CHECK(rep.theoretical_variance < prev);
    prev = rep.theoretical_variance;
  }
}

TEST_CASE("input guards") {
  CHECK_THROWS(monte_carlo_mle(0.7, 1.0, 1.0, 128, 50, 1));  // too few reps
  const KernelFamily fam = solve_g_family(0.7, 1.0, 64, FamilyOptions{false, 0, 3.0});
  CHECK_THROWS(mle_theta(fam, Eigen::VectorXd::Zero(12)));
}
