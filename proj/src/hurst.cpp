#include "mfbm/hurst.hpp"

#include <cmath>
#include <stdexcept>

namespace mfbm {

HurstParams constants(double H) {
  if (!(H > 0.0) || !(H <= 1.0)) {
    throw std::domain_error("constants: H must lie in (0,1]");
  }
  // Log-space evaluation keeps full relative accuracy across the range.
  const double lg_a = std::lgamma(1.5 - H);   // Gamma(3/2-H), argument in [0.5,1.5)
  const double lg_b = std::lgamma(H + 0.5);   // Gamma(H+1/2)
  const double lg_c = std::lgamma(3.0 - 2.0 * H);
  const double c_H = std::exp(-(std::log(2.0 * H) + lg_a + lg_b));
  const double lambda_H = std::exp(std::log(2.0 * H) + lg_b + lg_c - lg_a);
  double beta_H = 0.0;
  if (H < 1.0) {
    const double half_minus_H = 0.5 - H;
    beta_H = c_H * c_H * half_minus_H * half_minus_H * lambda_H / (2.0 - 2.0 * H);
  }
  return HurstParams{H, c_H, lambda_H, beta_H};
}

}  // namespace mfbm
