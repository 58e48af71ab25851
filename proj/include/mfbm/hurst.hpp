#ifndef MFBM_HURST_HPP
#define MFBM_HURST_HPP

namespace mfbm {

// Derived constants of a Hurst exponent H in (0,1]:
//
//   c_H      = 1 / (2H Gamma(3/2-H) Gamma(H+1/2))
//   lambda_H = 2H Gamma(H+1/2) Gamma(3-2H) / Gamma(3/2-H)
//   beta_H   = c_H^2 (1/2-H)^2 lambda_H / (2-2H)
//
// lambda_{1/2} = c_{1/2} = 1 and beta_{1/2} = 0.  At H = 1 the defining
// expression for beta_H degenerates (division by 2-2H); beta_H is only used
// for H < 1/2, so beta_1 is fixed to 0 as a documented sentinel.
struct HurstParams {
  double H;
  double c_H;
  double lambda_H;
  double beta_H;
};

// Evaluates the three constants from the Gamma function.
// Throws std::domain_error unless 0 < H <= 1.
HurstParams constants(double H);

}  // namespace mfbm

#endif
