#ifndef MFBM_SECOND_KIND_HPP
#define MFBM_SECOND_KIND_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mfbm/hurst.hpp"

namespace mfbm {

// Kernels handled by the product-integration assembly.
//   kappa:            H(2H-1)|u-v|^{2H-2}            (H > 1/2)
//   kappa_bar_scaled: beta_H |u-v|^{-2H} N(u,v)      (H < 1/2)
//   kappa_tilde:      |u-v|^{-2H} chi(min/max)       (H < 1/2)
enum class KernelId { zero, kappa, kappa_bar_scaled, kappa_tilde };

struct SecondKindProblem {
  KernelId kernel_id = KernelId::kappa;
  double H = 0.7;
  double eps = 1.0;                  // coefficient of the identity term, > 0
  std::function<double(double)> rhs; // right-hand side on [0,1]
  std::size_t n = 64;                // panels of the collocation mesh
};

// Collocation mesh on [0,1], symmetrically graded toward both endpoints
// (exponent q; q = 1 is uniform).  The solutions of the singular equations
// develop endpoint layers, which a uniform mesh resolves too slowly.
std::vector<double> unit_mesh(std::size_t n, double grading = 3.0);

// Product-integration (Nystrom) discretization of f |-> int_0^1 k(x,v) f(v) dv
// on a fixed mesh.  The unknown is piecewise linear between nodes; the
// singular factor |x-v|^alpha is integrated exactly against the hat basis,
// while the bounded factor (N or chi) is frozen at panel midpoints.
class UnitKernelOperator {
 public:
  UnitKernelOperator(KernelId id, double H, std::vector<double> mesh);

  const std::vector<double>& mesh() const { return mesh_; }
  const Eigen::MatrixXd& matrix() const { return W_; }
  KernelId id() const { return id_; }
  double hurst() const { return H_; }
  const HurstParams& params() const { return params_; }

  // Weight row at an arbitrary evaluation point x >= 0 (x may exceed 1 for
  // kappa/kappa_tilde, where the kernel extends off the unit square).
  Eigen::RowVectorXd weight_row(double x) const;

  // Pointwise kernel value (quadrature-backed for the bounded factors).
  double kernel(double x, double v) const;

  // Kernel value with |x-v| supplied exactly by the caller; keeps quadratures
  // near the diagonal free of cancellation in the distance.
  double kernel_dist(double x, double v, double dist) const;

 private:
  double bounded_factor(double x, double mid) const;

  KernelId id_;
  double H_;
  HurstParams params_;
  std::vector<double> mesh_;
  Eigen::MatrixXd W_;
  // dense lookup of the bounded factor (function of the ratio/argument alone)
  std::vector<double> table_x_;
  std::vector<double> table_y_;
};

// Solves (eps I + K) x = b for many shifts eps against one Hessenberg
// reduction of K; each solve is O(n^2).
class ShiftedOperatorSolver {
 public:
  explicit ShiftedOperatorSolver(const Eigen::MatrixXd& K);
  Eigen::VectorXd solve(double eps, const Eigen::VectorXd& b) const;

 private:
  Eigen::MatrixXd Q_;
  Eigen::MatrixXd Hess_;
};

// One-off Nystrom solve of eps x + int k(.,v) x(v) dv = rhs on the graded
// mesh.  Returns the nodal values; pair with unit_mesh(problem.n) for the
// abscissas.  Throws SolverError when the discrete system is numerically
// singular and std::invalid_argument for a bad problem description.
Eigen::VectorXd solve_second_kind(const SecondKindProblem& problem);

}  // namespace mfbm

#endif
