#ifndef MFBM_FILTERING_HPP
#define MFBM_FILTERING_HPP

#include <Eigen/Dense>
#include <string>

#include "mfbm/grid.hpp"
#include "mfbm/kernel_family.hpp"

namespace mfbm {

// Per-path functionals of the fundamental martingale.  Stochastic integrals
// with deterministic kernels put the kernel at panel midpoints against
// forward increments; the density exponent uses the adapted left endpoint for
// the integrand, which keeps the discrete mean-one property exact.
struct FilterOutput {
  Grid grid;
  double H = 0.5;
  std::string route;        // "wiener" or "fractional"
  Eigen::VectorXd M;        // martingale path (tilde martingale on the fractional route)
  Eigen::VectorXd W;        // innovation path
  Eigen::VectorXd phi;      // phi_t (resp. phi~_t) samples
  double log_density = 0.0;
};

// How the tilde transform X~_t = int_0^t rho~(s,t) dX_s is discretized:
//   midpoint      rho~ frozen at panel midpoints
//   panel_average rho~ averaged over each panel
//   whiten        Cholesky whitening of the fBm increment covariance, the
//                 discrete construction of the same transform.  Default: the
//                 quadrature modes leave the transformed increments slightly
//                 correlated and that bias is amplified exponentially by the
//                 density, so only the whitening form keeps the discrete
//                 density mean at one.
enum class TildeTransform { midpoint, panel_average, whiten };

class Filter {
 public:
  explicit Filter(const KernelFamily& family,
                  TildeTransform transform = TildeTransform::whiten);

  const KernelFamily& family() const { return fam_; }

  // M(t_j) = sum_{i<j} g(mid_i, t_j) dX_i
  Eigen::VectorXd martingale_path(const Eigen::VectorXd& X) const;
  // W(t_j) = sum_{i<j} dM_i / g(mid_i, mid_i); at H = 1/2 the normalization
  // is sqrt(d<M>/dt) = sqrt(1/2), the value that makes W a standard BM there
  Eigen::VectorXd innovation_path(const Eigen::VectorXd& M) const;
  // phi_t(X) = int_0^t R(s,t) dX_s (requires the derivative fields)
  Eigen::VectorXd phi_path(const Eigen::VectorXd& X) const;
  // X~ from the configured transform (tilde families only)
  Eigen::VectorXd tilde_transform(const Eigen::VectorXd& X) const;
  // X(t_j) = sum_{i<j} G(mid_i, t_j) dM_i
  Eigen::VectorXd reconstruct_X(const Eigen::VectorXd& M) const;

  // log dmu^X/dmu^W; defined for H > 3/4 (and trivially 0 at H = 1/2)
  double rn_log_density_wiener(const Eigen::VectorXd& X) const;
  // log dmu^X/dmu^{B^H}; defined for H < 1/4 on a tilde family
  double rn_log_density_fbm(const Eigen::VectorXd& X) const;

  // Diagnostic for the fractional diffusion representation: the compensator
  // path C(t_j) = int_0^{t_j} rho(s,t_j) phi~_s ds, so that X + C should be
  // an fBm in its own filtration (H < 1/4).  No sharp tolerance is attached;
  // it is exposed for qualitative checks only.
  Eigen::VectorXd fractional_compensator(const Eigen::VectorXd& X) const;

  // Full per-path summary on the route implied by H.
  FilterOutput run(const Eigen::VectorXd& X) const;

 private:
  void require_grid(const Eigen::VectorXd& v) const;

  const KernelFamily& fam_;
  TildeTransform transform_;
  Eigen::MatrixXd gmid_;     // (n+1) x n, row j holds g(mid_i, t_j) for i < j
  Eigen::MatrixXd Rmid_;     // same layout for R
  Eigen::MatrixXd Gmid_;     // same layout for G (kappa families)
  Eigen::MatrixXd rhomid_;   // same layout for the tilde transform weights
  Eigen::MatrixXd whiten_;   // inverse Cholesky factor (whiten mode)
  Eigen::VectorXd inv_norm_; // 1 / g(mid_i, mid_i)
};

// Brute-force conditioning oracle: weights h with
//   E(B_t | increments of X) = sum_i h_i (X_{t_i} - X_{t_{i-1}}),  t = t_k,
// from the normal correlation theorem (Cov(dX) h = Cov(B_t, dX)).  The
// independent cross-check of the solved kernel columns.
struct OracleWeights {
  Grid grid;
  double target_time = 0.0;
  Eigen::VectorXd weights;
};
OracleWeights discrete_conditional_oracle(double H, const Grid& grid, std::size_t t_index);

}  // namespace mfbm

#endif
