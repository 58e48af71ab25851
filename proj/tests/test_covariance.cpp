#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "mfbm/covariance.hpp"
#include "mfbm/kernels.hpp"

using mfbm::cov_fbm;
using mfbm::cov_mixed;

TEST_CASE("cov_fbm basics") {
  CHECK(cov_fbm(0.7, 1.3, 1.3) == doctest::Approx(std::pow(1.3, 1.4)).epsilon(1e-14));
  CHECK(cov_fbm(0.5, 0.4, 1.7) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(cov_fbm(0.7, 1.0, 2.0) == doctest::Approx(std::pow(2.0, 0.4)).epsilon(1e-14));
  CHECK(cov_fbm(0.3, 0.9, 1.1) == cov_fbm(0.3, 1.1, 0.9));
  CHECK_THROWS_AS(cov_fbm(0.7, -1.0, 1.0), std::domain_error);
}

TEST_CASE("cov_mixed basics") {
  CHECK(cov_mixed(0.3, 0.0, 5.0) == doctest::Approx(0.0));
  CHECK(cov_mixed(0.7, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  const double expect = 1.0 + 0.5 * (1.0 + std::pow(4.0, 1.2) - std::pow(3.0, 1.2));
  CHECK(cov_mixed(0.6, 1.0, 4.0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("cov_mixed is positive semidefinite on a 64-point grid") {
  const int m = 64;
  for (double H : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    Eigen::MatrixXd C(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double s = (i + 1) / static_cast<double>(m);
        const double t = (j + 1) / static_cast<double>(m);
        C(i, j) = cov_mixed(H, s, t);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("kappa is the mixed second derivative of cov_fbm off the diagonal") {
  const double h = 1e-4;
  for (double H : {0.6, 0.75, 0.9}) {
    for (double s : {0.3, 0.8}) {
      for (double t : {1.2, 1.7}) {
        const double fd = (cov_fbm(H, s + h, t + h) - cov_fbm(H, s + h, t - h) -
                           cov_fbm(H, s - h, t + h) + cov_fbm(H, s - h, t - h)) /
                          (4.0 * h * h);
        CHECK(fd == doctest::Approx(mfbm::kappa(H, s, t)).epsilon(1e-3));
      }
    }
  }
}
