#ifndef MFBM_ESTIMATION_HPP
#define MFBM_ESTIMATION_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "mfbm/kernel_family.hpp"

namespace mfbm {

// Drift MLE from one observed path Y on [0,T]:
//   theta_hat = int g(s,T) dY_s / int g(s,T) ds,
// with the exactly Gaussian error law  theta_hat - theta ~ N(0, 1/<M>_T).
//
// Unit noise coefficients are assumed (Y = theta t + B + B^H).  A general
// observation theta t + beta B_t + alpha B^H_t reduces to this form by the
// time-space rescaling Y'_u = Y_{cu} / (beta sqrt(c)) with
// c = (beta/alpha)^{1/(H-1/2)}, which carries the drift to
// theta' = theta sqrt(c)/beta; estimate theta' on Y' and map back.
struct EstimatorReport {
  double theta_hat = 0.0;
  double exact_variance = 0.0;  // 1 / int_0^T g(s,T) ds
  std::array<double, 2> ci95{}; // exact Gaussian 95% interval
  double T = 0.0;
  double H = 0.5;
  std::size_t n = 0;
};

// Uses the family's horizon column g(., t_end); the denominator is the
// family bracket, so exact_variance == 1/bracket(T) identically.
EstimatorReport mle_theta(const KernelFamily& family, const Eigen::VectorXd& Y);

// Scaling constant of the large-T variance limits: lambda_H for H > 1/2, 1 for
// H <= 1/2 (the two branches meet at 1 for H = 1/2).
double asymptotic_variance(double H);

struct MonteCarloReport {
  double H = 0.5;
  double theta = 0.0;
  double T = 0.0;
  std::size_t n = 0;
  std::size_t n_reps = 0;
  std::uint64_t seed = 0;
  double bias = 0.0;
  double bias_se = 0.0;
  double empirical_variance = 0.0;
  double empirical_variance_se = 0.0;  // s^2 sqrt(2/(m-1)), exact Gaussian law
  double theoretical_variance = 0.0;   // 1/<M>_T
  double scaled_variance = 0.0;        // T^{2-2H} (H>1/2) resp. T (H<1/2) times 1/<M>_T
  double asymptotic_constant = 0.0;    // lambda_H resp. 1
};

// Simulates n_reps drifted paths, estimates theta on each, and compares the
// replication statistics against the exact error law.  One kernel column is
// solved and shared across replications; replication r uses RNG substream r.
MonteCarloReport monte_carlo_mle(double H, double theta, double T, std::size_t n,
                                 std::size_t n_reps, std::uint64_t seed);

}  // namespace mfbm

#endif
