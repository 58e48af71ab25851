#ifndef MFBM_KERNEL_FAMILY_HPP
#define MFBM_KERNEL_FAMILY_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "mfbm/grid.hpp"
#include "mfbm/hurst.hpp"
#include "mfbm/second_kind.hpp"

namespace mfbm {

struct FamilyOptions {
  bool derivatives = true;   // also solve for g_dot and build R/G
  std::size_t unit_n = 0;    // internal mesh resolution; 0 -> same as grid n
  double grading = 3.0;      // mesh grading exponent
};

// The solution family g(s, t_j) of the fundamental-martingale equation on a
// uniform output grid, one rescaled unit-interval solve per column:
//
//   H > 1/2   (I eps + K_kappa) a = 1,                eps = t^{1-2H}, g = eps a(s/t)
//   H < 1/2   (I eps + beta_H K_kbar) a = c_H u(1-u)-rhs, eps = t^{2H-1}, g = a(s/t)
//   tilde     (I eps + K_ktilde) a = eps,             eps = t^{2H-1}, g~ = a(s/t)
//   H = 1/2   closed form g = 1/2 (R = 0, G = 2, <M>_t = t/2)
//
// The t-derivative column solves the differentiated equation with the same
// shifted operator; its diagonal singularity is split off analytically:
//   R(s,t) = -kernel(s,t) + S(s/t), with S bounded (one extra solve).
class KernelFamily {
 public:
  const HurstParams& params() const { return params_; }
  const Grid& grid() const { return grid_; }
  KernelId kind() const { return kind_; }
  bool closed_form_half() const { return kind_ == KernelId::zero; }
  bool tilde() const { return kind_ == KernelId::kappa_tilde; }
  bool has_derivatives() const;

  double t_at(std::size_t j) const { return grid_.nodes[j]; }

  // g(s, t_j), 0 <= s <= t_j (piecewise-linear in the unit variable s/t_j)
  double g_at(std::size_t j, double s) const;
  // diagonal trace g(t_j, t_j); g_diag(0) is the t->0 limit
  double g_diag(std::size_t j) const { return g_diag_[j]; }
  // diagonal interpolated at arbitrary s in [0, t_end]
  double g_diag_interp(double s) const;
  // <M>(t_j) = int_0^{t_j} g(s,t_j) ds by the global midpoint rule (the same
  // quadrature the estimator uses, so 1/bracket is the MLE variance exactly)
  double bracket(std::size_t j) const { return bracket_[j]; }

  // dg/dt(s, t_j), s < t_j; extension to s > t_j available through R_ext
  double g_dot_at(std::size_t j, double s) const;
  // R(s, t_j) = g_dot(s,t_j)/g(t_j,t_j)
  double R_at(std::size_t j, double s) const;
  // bounded correction S(s,t_j) = R(s,t_j) + kernel(s,t_j)
  double R_correction_at(std::size_t j, double s) const;
  // R(x, t_j) for x >= t_j, through the extension of the kernel equation
  double R_ext(double x, std::size_t j) const;
  // G(s, t_j) = 1 - (1/g(s,s)) int_0^{t_j} R(tau, s) dtau
  double G_at(std::size_t j, double s) const;
  // E phi_t^2 = -int_0^{t_j} R(s,t_j) kernel(s,t_j) ds
  double phi_variance(std::size_t j) const;

  // kernel value in global coordinates (kappa or kappa_tilde)
  double kernel_value(double a, double b) const;

  // Krein identity residuals at grid nodes i < j (relative); kappa only.
  //   ab : R(s,t)-R(t,s) = int_s^t R(s,tau) R(t,tau) dtau
  //   rrr: -R(t,s) + int_0^s R(t,r) R(s,r) dr = kappa(t,s)
  double krein_ab_residual(std::size_t i, std::size_t j) const;
  double krein_rrr_residual(std::size_t i, std::size_t j) const;

  const std::vector<double>& mesh() const { return mesh_; }
  const Eigen::VectorXd& unit_column(std::size_t j) const { return unit_g_[j]; }
  double column_scale(std::size_t j) const { return scale_[j]; }

 private:
  friend KernelFamily build_family(KernelId, double, double, std::size_t,
                                   const FamilyOptions&);
  double mesh_interp(const Eigen::VectorXd& vals, double u) const;
  double ext_kernel_cross(double x, double t) const;  // int_0^t k(r,t) k(r,x) dr
  void build_G_nodes();

  HurstParams params_{};
  Grid grid_{};
  KernelId kind_ = KernelId::kappa;
  std::vector<double> mesh_;
  std::shared_ptr<UnitKernelOperator> op_;
  std::vector<Eigen::VectorXd> unit_g_;  // per column (index 0 unused)
  std::vector<Eigen::VectorXd> unit_S_;  // bounded R-correction on the mesh
  std::vector<double> scale_;
  std::vector<double> eps_;
  std::vector<double> g_diag_;
  std::vector<double> bracket_;
  Eigen::MatrixXd G_nodes_;              // G(s_i, t_j), lower-triangular use
  Eigen::RowVectorXd row_at_one_;        // product-integration row at u = 1
  double cchi_ = 0.0;                    // int_0^1 (1-v)^{-2H} chi(v) dv (tilde)
  double cchi2_ = 0.0;                   // int_0^1 (1-v)^{-4H} chi(v)^2 dv (tilde)
};

// Family of solutions for every grid column; H in (0,1], t_end > 0.
// H = 1/2 yields the closed-form family; H < 1/2 the kappa_bar route
// (no derivative fields); H > 1/2 the kappa route.
KernelFamily solve_g_family(double H, double t_end, std::size_t n,
                            const FamilyOptions& opts = {});

// The tilde family (kernel kappa_tilde, H < 1/2) used by the fractional
// filtering route.
KernelFamily solve_g_tilde_family(double H, double t_end, std::size_t n,
                                  const FamilyOptions& opts = {});

// Single column g(., t) resampled to a uniform grid of n panels on [0, t];
// returns the nodal values (last entry = g(t,t)).
struct GColumn {
  std::vector<double> nodes;
  std::vector<double> values;
  double g_tt = 0.0;
};
GColumn solve_g(double H, double t, std::size_t n);

// Unit-interval singular perturbation solve: eps g + K g = rhs with rhs == 1
// (kappa, H > 1/2) or rhs = c_H u^{1/2-H}(1-u)^{1/2-H} (kappa_bar, H < 1/2).
struct UnitSolution {
  std::vector<double> mesh;
  Eigen::VectorXd values;
  double integral() const;  // exact integral of the piecewise-linear solution
};
UnitSolution solve_g_eps(double H, double eps, std::size_t n);

// Closed-form first-kind limit g^{(1)}(u) = c_H u^{1/2-H} (1-u)^{1/2-H}.
double g_limit(double H, double u);

}  // namespace mfbm

#endif
