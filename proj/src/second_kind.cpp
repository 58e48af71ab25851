#include "mfbm/second_kind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mfbm/errors.hpp"
#include "mfbm/kernels.hpp"
#include "mfbm/quadrature.hpp"

namespace mfbm {

namespace {

// Antiderivatives of the singular factor and of y * factor(y):
// for kappa, factor = H(2H-1)|y|^{2H-2}; for the -2H kernels, factor = |y|^{-2H}.
struct Moments {
  double p0;  // exponent of |y| in F0
  double c0;  // F0(y) = c0 sign(y) |y|^{p0}
  double p1;
  double c1;  // F1(y) = c1 |y|^{p1}
  double F0(double y) const {
    if (y == 0.0) return 0.0;
    return (y > 0.0 ? c0 : -c0) * std::pow(std::abs(y), p0);
  }
  double F1(double y) const { return c1 * std::pow(std::abs(y), p1); }
};

Moments moments_for(KernelId id, double H) {
  if (id == KernelId::kappa) {
    // integrand H(2H-1)|y|^{2H-2}
    return Moments{2.0 * H - 1.0, H, 2.0 * H, H - 0.5};
  }
  // integrand |y|^{-2H}
  return Moments{1.0 - 2.0 * H, 1.0 / (1.0 - 2.0 * H), 2.0 - 2.0 * H,
                 1.0 / (2.0 - 2.0 * H)};
}

}  // namespace

std::vector<double> unit_mesh(std::size_t n, double grading) {
  if (n < 8) throw std::invalid_argument("unit_mesh: need at least 8 panels");
  if (n % 2 != 0) throw std::invalid_argument("unit_mesh: panel count must be even");
  std::vector<double> u(n + 1);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j <= half; ++j) {
    u[j] = 0.5 * std::pow(2.0 * static_cast<double>(j) / static_cast<double>(n), grading);
  }
  for (std::size_t j = half; j <= n; ++j) {
    u[j] = 1.0 - 0.5 * std::pow(2.0 * static_cast<double>(n - j) / static_cast<double>(n),
                                grading);
  }
  u[0] = 0.0;
  u[n] = 1.0;
  return u;
}

UnitKernelOperator::UnitKernelOperator(KernelId id, double H, std::vector<double> mesh)
    : id_(id), H_(H), params_(constants(H)), mesh_(std::move(mesh)) {
  if (mesh_.size() < 2) throw std::invalid_argument("UnitKernelOperator: empty mesh");
  if (id_ == KernelId::kappa) {
    if (!(H > 0.5) || !(H <= 1.0))
      throw std::domain_error("UnitKernelOperator: kappa requires 1/2 < H <= 1");
  } else if (id_ == KernelId::kappa_bar_scaled || id_ == KernelId::kappa_tilde) {
    if (!(H > 0.0) || !(H < 0.5))
      throw std::domain_error("UnitKernelOperator: requires 0 < H < 1/2");
  }

  // Bounded-factor lookup: for kappa_tilde the factor is chi(ratio), for
  // kappa_bar it is a function of the cross-ratio c = min(u',v')/max(u',v').
  // Tabulated on a mesh graded toward both endpoints where the factor has
  // singular derivatives; piecewise-linear lookup is well inside the solver
  // tolerance, and the public kernel functions stay quadrature-exact.
  if (id_ == KernelId::kappa_tilde || id_ == KernelId::kappa_bar_scaled) {
    table_x_ = unit_mesh(4096, 3.0);
    table_y_.resize(table_x_.size());
    for (std::size_t k = 0; k < table_x_.size(); ++k) {
      const double r = table_x_[k];
      if (id_ == KernelId::kappa_tilde) {
        table_y_[k] = chi_fn(params_, r);
      } else {
        // kappa_bar's factor keyed by the cross-ratio c in [0,1]
        if (r <= 0.0) {
          table_y_[k] = 0.0;
        } else {
          const double p = -0.5 - H_;
          const double q = 2.0 * H_ - 1.0;
          auto f = [&](double y) { return std::pow(y, p) * std::pow(1.0 - r * y, q); };
          const double integral = integrate_de(f, 0.0, 0.5, 1e-11) +
                                  integrate_de(f, 0.5, 1.0, 1e-11);
          table_y_[k] = params_.beta_H * std::pow(r, 0.5 - H_) * integral;
        }
      }
    }
  }

  const auto m = static_cast<Eigen::Index>(mesh_.size());
  W_.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    W_.row(i) = weight_row(mesh_[static_cast<std::size_t>(i)]);
  }
}

double UnitKernelOperator::bounded_factor(double x, double mid) const {
  switch (id_) {
    case KernelId::zero:
      return 0.0;
    case KernelId::kappa:
      return 1.0;
    case KernelId::kappa_tilde: {
      if (x <= 0.0 || mid <= 0.0) return 0.0;
      const double ratio = std::min(x, mid) / std::max(x, mid);
      // PL lookup of chi
      const auto it = std::upper_bound(table_x_.begin(), table_x_.end(), ratio);
      if (it == table_x_.begin()) return table_y_.front();
      if (it == table_x_.end()) return table_y_.back();
      const std::size_t k = static_cast<std::size_t>(it - table_x_.begin());
      const double w = (ratio - table_x_[k - 1]) / (table_x_[k] - table_x_[k - 1]);
      return (1.0 - w) * table_y_[k - 1] + w * table_y_[k];
    }
    case KernelId::kappa_bar_scaled: {
      if (x <= 0.0 || mid <= 0.0 || x >= 1.0 || mid >= 1.0) return 0.0;
      const double xp = x / (1.0 - x);
      const double mp = mid / (1.0 - mid);
      const double c = std::min(xp, mp) / std::max(xp, mp);
      const auto it = std::upper_bound(table_x_.begin(), table_x_.end(), c);
      if (it == table_x_.begin()) return table_y_.front();
      if (it == table_x_.end()) return table_y_.back();
      const std::size_t k = static_cast<std::size_t>(it - table_x_.begin());
      const double w = (c - table_x_[k - 1]) / (table_x_[k] - table_x_[k - 1]);
      return (1.0 - w) * table_y_[k - 1] + w * table_y_[k];
    }
  }
  return 0.0;
}

Eigen::RowVectorXd UnitKernelOperator::weight_row(double x) const {
  const std::size_t m = mesh_.size();
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(m));
  if (id_ == KernelId::zero) return w;
  const Moments mom = moments_for(id_, H_);
  for (std::size_t p = 0; p + 1 < m; ++p) {
    const double a = mesh_[p];
    const double b = mesh_[p + 1];
    const double hp = b - a;
    const double M0 = mom.F0(b - x) - mom.F0(a - x);
    const double M1 = mom.F1(b - x) - mom.F1(a - x);
    const double fac = bounded_factor(x, 0.5 * (a + b));
    if (fac == 0.0) continue;
    w(static_cast<Eigen::Index>(p)) += fac * ((b - x) * M0 - M1) / hp;
    w(static_cast<Eigen::Index>(p + 1)) += fac * (M1 + (x - a) * M0) / hp;
  }
  return w;
}

double UnitKernelOperator::kernel(double x, double v) const {
  return kernel_dist(x, v, std::abs(x - v));
}

double UnitKernelOperator::kernel_dist(double x, double v, double dist) const {
  switch (id_) {
    case KernelId::zero:
      return 0.0;
    case KernelId::kappa:
      return H_ * (2.0 * H_ - 1.0) * std::pow(dist, 2.0 * H_ - 2.0);
    case KernelId::kappa_tilde:
    case KernelId::kappa_bar_scaled:
      return std::pow(dist, -2.0 * H_) * bounded_factor(x, v);
  }
  return 0.0;
}

ShiftedOperatorSolver::ShiftedOperatorSolver(const Eigen::MatrixXd& K) {
  Eigen::HessenbergDecomposition<Eigen::MatrixXd> hd(K);
  Hess_ = hd.matrixH();
  Q_ = hd.matrixQ();
}

Eigen::VectorXd ShiftedOperatorSolver::solve(double eps, const Eigen::VectorXd& b) const {
  const Eigen::Index n = Hess_.rows();
  Eigen::MatrixXd A = Hess_;
  A.diagonal().array() += eps;
  Eigen::VectorXd y = Q_.transpose() * b;

  // Givens elimination of the subdiagonal, then back substitution.
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double aii = A(i, i), sub = A(i + 1, i);
    if (sub == 0.0) continue;
    const double r = std::hypot(aii, sub);
    const double c = aii / r, s = sub / r;
    for (Eigen::Index k = i; k < n; ++k) {
      const double t1 = A(i, k), t2 = A(i + 1, k);
      A(i, k) = c * t1 + s * t2;
      A(i + 1, k) = -s * t1 + c * t2;
    }
    const double y1 = y(i), y2 = y(i + 1);
    y(i) = c * y1 + s * y2;
    y(i + 1) = -s * y1 + c * y2;
  }
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(A(i, i));
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  if (!(dmin > 0.0) || dmax / dmin > 1e15) {
    std::ostringstream msg;
    msg << "ShiftedOperatorSolver: numerically singular system (condition estimate "
        << (dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity()) << ")";
    throw SolverError(msg.str());
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double acc = y(i);
    for (Eigen::Index k = i + 1; k < n; ++k) acc -= A(i, k) * x(k);
    x(i) = acc / A(i, i);
  }
  return Q_ * x;
}

Eigen::VectorXd solve_second_kind(const SecondKindProblem& problem) {
  if (!(problem.eps > 0.0)) {
    throw std::invalid_argument("solve_second_kind: eps must be positive");
  }
  if (!problem.rhs) throw std::invalid_argument("solve_second_kind: missing rhs");
  const std::vector<double> mesh = unit_mesh(problem.n);
  UnitKernelOperator op(problem.kernel_id, problem.H, mesh);
  const auto m = static_cast<Eigen::Index>(mesh.size());
  Eigen::MatrixXd A = op.matrix();
  A.diagonal().array() += problem.eps;
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = problem.rhs(mesh[static_cast<std::size_t>(i)]);
    if (!std::isfinite(v)) throw std::invalid_argument("solve_second_kind: non-finite rhs");
    b(i) = v;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  const double dmin = diag.minCoeff(), dmax = diag.maxCoeff();
  if (!(dmin > 0.0) || dmax / dmin > 1e15) {
    std::ostringstream msg;
    msg << "solve_second_kind: numerically singular system (condition estimate "
        << (dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity()) << ")";
    throw SolverError(msg.str());
  }
  return lu.solve(b);
}

}  // namespace mfbm
