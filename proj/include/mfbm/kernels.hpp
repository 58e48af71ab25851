#ifndef MFBM_KERNELS_HPP
#define MFBM_KERNELS_HPP

#include "mfbm/hurst.hpp"

namespace mfbm {

// kappa(s,r) = H(2H-1)|s-r|^{2H-2}, the weakly singular kernel of the H > 1/2
// equation.  Throws on s == r or H <= 1/2.
double kappa(double H, double s, double r);

// Bounded factor N(u,v) of the factored representation
//   kappa_bar(u,v) = |u-v|^{-2H} N(u,v),  u,v in (0,1),
// evaluated through the x-substitution that removes the near-diagonal blow-up:
//   N = (a/b)^{1/2-H} int_0^1 y^{-1/2-H} (1 - (a/b) y)^{2H-1} dy,
//   a = min(u',v'), b = max(u',v'), u' = u/(1-u), v' = v/(1-v).
double kappa_bar_N(double H, double u, double v);

// kappa_bar itself (H < 1/2).  Vanishes when u or v hits {0,1}; throws on
// u == v in the open square and on arguments outside [0,1].
double kappa_bar(double H, double u, double v);

// chi(u) = beta_H u^{1/2-H} L(u/(1-u)) with
//   L(v) = int_0^v r^{-1/2-H} (1+r)^{-1/2-H} (1 - r/v)^{1-2H} dr.
// Continuous on [0,1], chi(0) = 0.  Requires H < 1/2.
double chi_fn(double H, double u);
double chi_fn(const HurstParams& p, double u);

// kappa_tilde(s,t) = |t-s|^{-2H} chi(min(s,t)/max(s,t)), H < 1/2.
double kappa_tilde(double H, double s, double t);

// rho_tilde(s,t) = sqrt(beta_H) s^{1/2-H} int_s^t tau^{H-1/2} (tau-s)^{-1/2-H} dtau,
// the kernel turning B^H into a Brownian motion (H < 1/2); rho_tilde(t,t) = 0
// and the whole function scales as rho_tilde(s,t) = t^{1/2-H} rho_tilde(s/t, 1).
double rho_tilde(double H, double s, double t);

// Closed-form partial derivative d/dt rho_tilde(s,t).
double rho_tilde_dot(double H, double s, double t);

// Inverse kernel rho(s,t) = sqrt((2-2H)/lambda_H) s^{1/2-H} K_1(s,t) with
// K_1(s,t) = -2H d/ds int_s^t r^{H-1/2}(r-s)^{H-1/2} dr, mapping the
// transformed path back:  X_t = int_0^t rho(s,t) d(tilde X)_s.
double rho(double H, double s, double t);

}  // namespace mfbm

#endif
