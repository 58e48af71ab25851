#ifndef MFBM_COVARIANCE_HPP
#define MFBM_COVARIANCE_HPP

#include <Eigen/Dense>
#include <vector>

namespace mfbm {

// Covariance of fractional Brownian motion,
//   E B^H_s B^H_t = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
// Throws std::domain_error for negative times.
double cov_fbm(double H, double s, double t);

// Covariance of the mixed process X = B + B^H with independent components:
//   min(s,t) + cov_fbm(H, s, t).
double cov_mixed(double H, double s, double t);

// Covariance matrix of the fBm increments over consecutive panels of `nodes`
// (size m x m for m = nodes.size()-1).  Shared by the exact path simulator and
// the discrete conditioning oracle.
Eigen::MatrixXd fbm_increment_covariance(double H, const std::vector<double>& nodes);

}  // namespace mfbm

#endif
