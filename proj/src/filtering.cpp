#include "mfbm/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfbm/covariance.hpp"
#include "mfbm/errors.hpp"
#include "mfbm/kernels.hpp"
#include "mfbm/quadrature.hpp"
#include "mfbm/second_kind.hpp"

namespace mfbm {

namespace {

constexpr const char* kRegimeMsg =
    "measure equivalence fails for 1/4 <= H <= 3/4 (H != 1/2): the Wiener route "
    "needs H > 3/4, the fractional route H < 1/4";

// rho_tilde(u,1) tabulated once on a graded mesh; rho_tilde(s,t) =
// t^{1/2-H} rho_tilde(s/t, 1) by scaling.
class RhoTildeTable {
 public:
  explicit RhoTildeTable(double H) : H_(H), xs_(unit_mesh(4096, 3.0)) {
    ys_.resize(xs_.size());
    for (std::size_t k = 0; k < xs_.size(); ++k) ys_[k] = rho_tilde(H, xs_[k], 1.0);
  }
  double operator()(double s, double t) const {
    if (s <= 0.0 || s >= t) return 0.0;
    const double u = s / t;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
    const auto k = static_cast<std::size_t>(it - xs_.begin());
    if (k == 0) return ys_.front();
    if (k >= xs_.size()) return ys_.back();
    const double w = (u - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
    return std::pow(t, 0.5 - H_) * ((1.0 - w) * ys_[k - 1] + w * ys_[k]);
  }

 private:
  double H_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace

Filter::Filter(const KernelFamily& family, TildeTransform transform)
    : fam_(family), transform_(transform) {
  const Grid& grid = fam_.grid();
  const auto n = static_cast<Eigen::Index>(grid.n);
  const double dt = grid.dt();

  gmid_.setZero(n + 1, n);
  for (Eigen::Index j = 1; j <= n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      gmid_(j, i) = fam_.g_at(static_cast<std::size_t>(j),
                              (static_cast<double>(i) + 0.5) * dt);
    }
  }

  inv_norm_.resize(n);
  if (fam_.closed_form_half()) {
    inv_norm_.setConstant(1.0 / std::sqrt(0.5));
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double gd = fam_.g_diag_interp((static_cast<double>(i) + 0.5) * dt);
      inv_norm_(i) = (gd > 0.0) ? 1.0 / gd : std::numeric_limits<double>::quiet_NaN();
    }
  }

  const bool has_R = fam_.has_derivatives() &&
                     (fam_.kind() == KernelId::kappa || fam_.kind() == KernelId::kappa_tilde);
  if (has_R || fam_.closed_form_half()) {
    // R = -kernel + S: the singular part is panel-averaged in closed form,
    // the bounded correction taken at the panel midpoint
    Rmid_.setZero(n + 1, n);
    if (!fam_.closed_form_half()) {
      const double H = fam_.params().H;
      const bool tilde = fam_.tilde();
      for (Eigen::Index j = 1; j <= n; ++j) {
        const double t = grid.nodes[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < j; ++i) {
          const double a = static_cast<double>(i) * dt;
          const double b = a + dt;
          const double mid = a + 0.5 * dt;
          double kavg;
          if (!tilde) {
            kavg = (H / dt) * (std::pow(t - a, 2.0 * H - 1.0) -
                               std::pow(t - b, 2.0 * H - 1.0));
          } else {
            const double chi_mid =
                fam_.kernel_value(mid, t) * std::pow(t - mid, 2.0 * H);
            kavg = chi_mid / ((1.0 - 2.0 * H) * dt) *
                   (std::pow(t - a, 1.0 - 2.0 * H) - std::pow(t - b, 1.0 - 2.0 * H));
          }
          Rmid_(j, i) = -kavg + fam_.R_correction_at(static_cast<std::size_t>(j), mid);
        }
      }
    }
  }

  if (fam_.closed_form_half() ||
      (fam_.kind() == KernelId::kappa && fam_.has_derivatives())) {
    Gmid_.setZero(n + 1, n);
    for (Eigen::Index j = 1; j <= n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        Gmid_(j, i) = fam_.closed_form_half()
                          ? 2.0
                          : fam_.G_at(static_cast<std::size_t>(j),
                                      (static_cast<double>(i) + 0.5) * dt);
      }
    }
  }

  if (fam_.tilde()) {
    const double H = fam_.params().H;
    if (transform_ == TildeTransform::whiten) {
      Eigen::MatrixXd C = fbm_increment_covariance(H, grid.nodes);
      Eigen::LLT<Eigen::MatrixXd> llt(C);
      if (llt.info() != Eigen::Success) {
        C.diagonal().array() += 1e-12;
        llt.compute(C);
        if (llt.info() != Eigen::Success) {
          throw SolverError("Filter: fBm increment covariance not positive definite");
        }
      }
      const Eigen::MatrixXd L = llt.matrixL();
      whiten_ = std::sqrt(dt) *
                L.triangularView<Eigen::Lower>().solve(
                    Eigen::MatrixXd::Identity(n, n));
    } else {
      const RhoTildeTable rho_tab(H);
      rhomid_.setZero(n + 1, n);
      const QuadRule gl = gauss_legendre_01(8);
      for (Eigen::Index j = 1; j <= n; ++j) {
        const double t = grid.nodes[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < j; ++i) {
          const double a = static_cast<double>(i) * dt;
          if (transform_ == TildeTransform::midpoint) {
            rhomid_(j, i) = rho_tab(a + 0.5 * dt, t);
          } else {
            double acc = 0.0;
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
              acc += gl.weights[q] * rho_tab(a + gl.nodes[q] * dt, t);
            }
            rhomid_(j, i) = acc;  // panel average (weights sum to 1)
          }
        }
      }
    }
  }
}

void Filter::require_grid(const Eigen::VectorXd& v) const {
  if (v.size() != static_cast<Eigen::Index>(fam_.grid().n + 1)) {
    throw std::invalid_argument("Filter: path length does not match the family grid");
  }
}

Eigen::VectorXd Filter::martingale_path(const Eigen::VectorXd& X) const {
  require_grid(X);
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  const Eigen::VectorXd dX = X.tail(n) - X.head(n);
  Eigen::VectorXd M(n + 1);
  M(0) = 0.0;
  M.tail(n) = (gmid_ * dX).tail(n);
  return M;
}

Eigen::VectorXd Filter::innovation_path(const Eigen::VectorXd& M) const {
  require_grid(M);
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  if (!fam_.closed_form_half() && !(fam_.kind() == KernelId::kappa ||
                                    fam_.kind() == KernelId::kappa_tilde)) {
    throw std::logic_error("innovation_path: needs a positive diagonal family");
  }
  Eigen::VectorXd W(n + 1);
  W(0) = 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(inv_norm_(i))) {
      throw SolverError("innovation_path: nonpositive diagonal g(t,t)");
    }
    acc += (M(i + 1) - M(i)) * inv_norm_(i);
    W(i + 1) = acc;
  }
  return W;
}

Eigen::VectorXd Filter::phi_path(const Eigen::VectorXd& X) const {
  require_grid(X);
  if (Rmid_.size() == 0) throw std::logic_error("phi_path: family has no derivative fields");
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  const Eigen::VectorXd dX = X.tail(n) - X.head(n);
  Eigen::VectorXd phi(n + 1);
  phi(0) = 0.0;
  phi.tail(n) = (Rmid_ * dX).tail(n);
  return phi;
}

Eigen::VectorXd Filter::tilde_transform(const Eigen::VectorXd& X) const {
  require_grid(X);
  if (!fam_.tilde()) throw std::logic_error("tilde_transform: not a tilde family");
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  const Eigen::VectorXd dX = X.tail(n) - X.head(n);
  Eigen::VectorXd Xt(n + 1);
  Xt(0) = 0.0;
  if (transform_ == TildeTransform::whiten) {
    const Eigen::VectorXd dXt = whiten_ * dX;
    for (Eigen::Index i = 0; i < n; ++i) Xt(i + 1) = Xt(i) + dXt(i);
  } else {
    Xt.tail(n) = (rhomid_ * dX).tail(n);
  }
  return Xt;
}

Eigen::VectorXd Filter::reconstruct_X(const Eigen::VectorXd& M) const {
  require_grid(M);
  if (Gmid_.size() == 0) throw std::logic_error("reconstruct_X: G not available");
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  const Eigen::VectorXd dM = M.tail(n) - M.head(n);
  Eigen::VectorXd Xh(n + 1);
  Xh(0) = 0.0;
  Xh.tail(n) = (Gmid_ * dM).tail(n);
  return Xh;
}

double Filter::rn_log_density_wiener(const Eigen::VectorXd& X) const {
  require_grid(X);
  const double H = fam_.params().H;
  if (fam_.closed_form_half()) return 0.0;  // phi == 0: X is the trivial Gaussian case
  if (!(fam_.kind() == KernelId::kappa && H > 0.75)) {
    throw UnsupportedRegimeError(std::string("rn_density_wiener: ") + kRegimeMsg);
  }
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  const double dt = fam_.grid().dt();
  const Eigen::VectorXd phi = phi_path(X);
  double logd = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double dX = X(j + 1) - X(j);
    logd += -phi(j) * dX - 0.5 * phi(j) * phi(j) * dt;
  }
  return logd;
}

double Filter::rn_log_density_fbm(const Eigen::VectorXd& X) const {
  require_grid(X);
  const double H = fam_.params().H;
  if (!fam_.tilde() || !(H < 0.25)) {
    throw UnsupportedRegimeError(std::string("rn_density_fbm: ") + kRegimeMsg);
  }
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  const double dt = fam_.grid().dt();
  const Eigen::VectorXd Xt = tilde_transform(X);
  const Eigen::VectorXd phi = phi_path(Xt);
  double logd = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double dXt = Xt(j + 1) - Xt(j);
    logd += -phi(j) * dXt - 0.5 * phi(j) * phi(j) * dt;
  }
  return logd;
}

Eigen::VectorXd Filter::fractional_compensator(const Eigen::VectorXd& X) const {
  require_grid(X);
  const double H = fam_.params().H;
  if (!fam_.tilde() || !(H < 0.25)) {
    throw UnsupportedRegimeError(std::string("fractional_compensator: ") + kRegimeMsg);
  }
  const auto n = static_cast<Eigen::Index>(fam_.grid().n);
  const double dt = fam_.grid().dt();
  const Eigen::VectorXd phi = phi_path(tilde_transform(X));
  Eigen::VectorXd C(n + 1);
  C(0) = 0.0;
  for (Eigen::Index j = 1; j <= n; ++j) {
    const double t = fam_.grid().nodes[static_cast<std::size_t>(j)];
    double acc = 0.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double mid = (static_cast<double>(i) + 0.5) * dt;
      acc += rho(H, mid, t) * 0.5 * (phi(i) + phi(i + 1)) * dt;
    }
    C(j) = acc;
  }
  return C;
}

FilterOutput Filter::run(const Eigen::VectorXd& X) const {
  FilterOutput out;
  out.grid = fam_.grid();
  out.H = fam_.params().H;
  if (fam_.kind() == KernelId::kappa_bar_scaled) {
    // the direct small-H family carries M and the MLE, but no density route
    throw UnsupportedRegimeError(std::string("filter: ") + kRegimeMsg);
  }
  if (fam_.tilde()) {
    out.route = "fractional";
    const Eigen::VectorXd Xt = tilde_transform(X);
    out.M = martingale_path(Xt);
    out.W = innovation_path(out.M);
    out.phi = phi_path(Xt);
    out.log_density = rn_log_density_fbm(X);
  } else {
    out.route = "wiener";
    out.M = martingale_path(X);
    out.W = innovation_path(out.M);
    if (fam_.closed_form_half()) {
      out.phi = Eigen::VectorXd::Zero(X.size());
      out.log_density = 0.0;
    } else {
      out.phi = phi_path(X);
      out.log_density = rn_log_density_wiener(X);
    }
  }
  return out;
}

OracleWeights discrete_conditional_oracle(double H, const Grid& grid, std::size_t t_index) {
  if (!(H > 0.0) || !(H < 1.0)) throw std::domain_error("oracle: H outside (0,1)");
  if (t_index < 1 || t_index > grid.n) throw std::invalid_argument("oracle: bad grid index");
  if (grid.n > 512) throw std::invalid_argument("oracle: dense solve capped at n = 512");
  const auto k = static_cast<Eigen::Index>(t_index);
  const double dt = grid.dt();
  std::vector<double> sub(grid.nodes.begin(), grid.nodes.begin() + t_index + 1);
  Eigen::MatrixXd C = fbm_increment_covariance(H, sub);
  C.diagonal().array() += dt;  // independent Brownian increments
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() != Eigen::Success) {
    C.diagonal().array() += 1e-12;
    llt.compute(C);
    if (llt.info() != Eigen::Success) {
      throw SolverError("oracle: increment covariance not positive definite");
    }
  }
  OracleWeights out;
  out.grid = grid;
  out.target_time = grid.nodes[t_index];
  out.weights = llt.solve(Eigen::VectorXd::Constant(k, dt));
  return out;
}

}  // namespace mfbm
