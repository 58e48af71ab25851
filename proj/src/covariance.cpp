#include "mfbm/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace mfbm {

double cov_fbm(double H, double s, double t) {
  if (!(H > 0.0) || !(H <= 1.0)) throw std::domain_error("cov_fbm: H outside (0,1]");
  if (s < 0.0 || t < 0.0) throw std::domain_error("cov_fbm: negative time");
  const double e = 2.0 * H;
  return 0.5 * (std::pow(t, e) + std::pow(s, e) - std::pow(std::abs(t - s), e));
}

double cov_mixed(double H, double s, double t) {
  return std::min(s, t) + cov_fbm(H, s, t);
}

Eigen::MatrixXd fbm_increment_covariance(double H, const std::vector<double>& nodes) {
  const auto m = static_cast<Eigen::Index>(nodes.size()) - 1;
  if (m < 1) throw std::invalid_argument("fbm_increment_covariance: need >= 2 nodes");
  Eigen::MatrixXd C(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = cov_fbm(H, nodes[i + 1], nodes[j + 1]) -
                       cov_fbm(H, nodes[i + 1], nodes[j]) -
                       cov_fbm(H, nodes[i], nodes[j + 1]) +
                       cov_fbm(H, nodes[i], nodes[j]);
      C(i, j) = v;
      C(j, i) = v;
    }
  }
  return C;
}

}  // namespace mfbm
