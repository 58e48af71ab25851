#include "mfbm/kernel_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfbm/errors.hpp"
#include "mfbm/quadrature.hpp"

namespace mfbm {

namespace {

double pl_interp(const std::vector<double>& xs, const Eigen::VectorXd& ys, double x) {
  if (x <= xs.front()) return ys(0);
  if (x >= xs.back()) return ys(ys.size() - 1);
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto k = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return (1.0 - w) * ys(static_cast<Eigen::Index>(k - 1)) +
         w * ys(static_cast<Eigen::Index>(k));
}

double mesh_integral(const std::vector<double>& xs, const Eigen::VectorXd& ys) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    acc += 0.5 * (ys(static_cast<Eigen::Index>(k)) + ys(static_cast<Eigen::Index>(k + 1))) *
           (xs[k + 1] - xs[k]);
  }
  return acc;
}

// Exact integral of the piecewise-linear interpolant of f against the
// singular factor H(2H-1)|tau-center|^{2H-2} over [taus.front(), taus.back()].
double kappa_prodint(const std::vector<double>& taus, const std::vector<double>& fvals,
                     double center, double H) {
  auto F0 = [&](double y) {
    if (y == 0.0) return 0.0;
    return (y > 0.0 ? H : -H) * std::pow(std::abs(y), 2.0 * H - 1.0);
  };
  auto F1 = [&](double y) { return (H - 0.5) * std::pow(std::abs(y), 2.0 * H); };
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < taus.size(); ++p) {
    const double a = taus[p], b = taus[p + 1], hp = b - a;
    const double M0 = F0(b - center) - F0(a - center);
    const double M1 = F1(b - center) - F1(a - center);
    const double wl = ((b - center) * M0 - M1) / hp;
    const double wr = (M1 + (center - a) * M0) / hp;
    acc += wl * fvals[p] + wr * fvals[p + 1];
  }
  return acc;
}

double trapz(const std::vector<double>& xs, const std::vector<double>& ys) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    acc += 0.5 * (ys[k] + ys[k + 1]) * (xs[k + 1] - xs[k]);
  }
  return acc;
}

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace

bool KernelFamily::has_derivatives() const { return !unit_S_.empty() || closed_form_half(); }

double KernelFamily::mesh_interp(const Eigen::VectorXd& vals, double u) const {
  return pl_interp(mesh_, vals, u);
}

double KernelFamily::g_at(std::size_t j, double s) const {
  if (closed_form_half()) return 0.5;
  if (j == 0) return g_diag_[0];
  const double t = t_at(j);
  if (s < 0.0 || s > t * (1.0 + 1e-12)) throw std::invalid_argument("g_at: s outside [0,t_j]");
  return scale_[j] * mesh_interp(unit_g_[j], s / t);
}

double KernelFamily::g_diag_interp(double s) const {
  if (closed_form_half()) return 0.5;
  const double dt = grid_.dt();
  const double x = std::clamp(s / dt, 0.0, static_cast<double>(grid_.n));
  const auto k = static_cast<std::size_t>(std::min(x, static_cast<double>(grid_.n) - 1.0));
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * g_diag_[k] + w * g_diag_[k + 1];
}

double KernelFamily::kernel_value(double a, double b) const {
  const double H = params_.H;
  switch (kind_) {
    case KernelId::zero:
      return 0.0;
    case KernelId::kappa:
      return H * (2.0 * H - 1.0) * std::pow(std::abs(a - b), 2.0 * H - 2.0);
    case KernelId::kappa_tilde: {
      // scale-invariant ratio; reuse the operator's chi lookup
      const double t = std::max(a, b);
      return op_->kernel(a / t, b / t) * std::pow(t, -2.0 * H);
    }
    case KernelId::kappa_bar_scaled:
      throw std::logic_error("kernel_value: not defined for the kappa_bar family");
  }
  return 0.0;
}

double KernelFamily::R_at(std::size_t j, double s) const {
  if (closed_form_half()) return 0.0;
  if (unit_S_.empty()) throw std::logic_error("R_at: family built without derivatives");
  if (j == 0 || j > grid_.n) throw std::invalid_argument("R_at: bad column");
  const double t = t_at(j);
  if (!(s < t)) throw std::invalid_argument("R_at: requires s < t_j");
  return -kernel_value(s, t) + mesh_interp(unit_S_[j], s / t);
}

double KernelFamily::R_correction_at(std::size_t j, double s) const {
  if (closed_form_half()) return 0.0;
  if (unit_S_.empty()) throw std::logic_error("R_correction_at: no derivatives");
  return mesh_interp(unit_S_[j], s / t_at(j));
}

double KernelFamily::g_dot_at(std::size_t j, double s) const {
  if (closed_form_half()) return 0.0;
  return g_diag_[j] * R_at(j, s);
}

double KernelFamily::ext_kernel_cross(double x, double t) const {
  // int_0^t k(r,t) k(r,x) dr for x >= t, kappa kernel:
  //   C^2 t^{4H-3} int_0^1 w^{2H-2} (x/t - 1 + w)^{2H-2} dw,  C = H(2H-1)
  const double H = params_.H;
  const double C = H * (2.0 * H - 1.0);
  const double delta = x / t - 1.0;
  auto f = [&](double w) {
    return std::pow(w, 2.0 * H - 2.0) * std::pow(delta + w, 2.0 * H - 2.0);
  };
  const double I = integrate_de(f, 0.0, 1.0, 1e-10);
  return C * C * std::pow(t, 4.0 * H - 3.0) * I;
}

double KernelFamily::R_ext(double x, std::size_t j) const {
  if (closed_form_half()) return 0.0;
  if (kind_ != KernelId::kappa) {
    throw std::logic_error("R_ext: extension only built for the kappa family");
  }
  if (unit_S_.empty()) throw std::logic_error("R_ext: family built without derivatives");
  if (j == 0 || j > grid_.n) throw std::invalid_argument("R_ext: bad column");
  const double t = t_at(j);
  if (!(x > t)) throw std::invalid_argument("R_ext: requires x > t_j");
  const double H = params_.H;
  // R(x,t) = -kappa(x,t) - int_0^t R(r,t) kappa(r,x) dr
  //        = -kappa(x,t) + int_0^t k(r,t) k(r,x) dr - t^{2H-1} row(x/t) . S
  const Eigen::RowVectorXd row = op_->weight_row(x / t);
  const double smooth = std::pow(t, 2.0 * H - 1.0) * row.dot(unit_S_[j]);
  const double kk = ext_kernel_cross(x, t);
  return -kernel_value(x, t) + kk - smooth;
}

double KernelFamily::phi_variance(std::size_t j) const {
  if (closed_form_half()) return 0.0;
  if (unit_S_.empty()) throw std::logic_error("phi_variance: no derivatives");
  const double H = params_.H;
  const double t = t_at(j);
  if (kind_ == KernelId::kappa) {
    if (!(H > 0.75)) throw std::domain_error("phi_variance: finite only for H > 3/4");
    const double C = H * (2.0 * H - 1.0);
    const double kk = C * C * std::pow(t, 4.0 * H - 3.0) / (4.0 * H - 3.0);
    return kk - std::pow(t, 2.0 * H - 1.0) * row_at_one_.dot(unit_S_[j]);
  }
  if (kind_ == KernelId::kappa_tilde) {
    if (!(H < 0.25)) throw std::domain_error("phi_variance: finite only for H < 1/4");
    const double kk = std::pow(t, 1.0 - 4.0 * H) * cchi2_;
    return kk - std::pow(t, 1.0 - 2.0 * H) * row_at_one_.dot(unit_S_[j]);
  }
  throw std::logic_error("phi_variance: kappa_bar family has no derivative fields");
}

double KernelFamily::G_at(std::size_t j, double s) const {
  if (closed_form_half()) return 2.0;
  if (G_nodes_.size() == 0) throw std::logic_error("G_at: G not built for this family");
  if (j == 0) return G_nodes_(0, 0);
  const double dt = grid_.dt();
  const double x = std::clamp(s / dt, 0.0, static_cast<double>(j));
  auto i = static_cast<std::size_t>(x);
  if (i >= j) i = j - 1;
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * G_nodes_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
         w * G_nodes_(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(j));
}

void KernelFamily::build_G_nodes() {
  const std::size_t n = grid_.n;
  const double H = params_.H;
  const std::size_t m = mesh_.size();
  G_nodes_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1),
                                   static_cast<Eigen::Index>(n + 1));
  // s = 0 limit: G(0,t) = 1 + H t^{2H-1}
  for (std::size_t j = 0; j <= n; ++j) {
    G_nodes_(0, static_cast<Eigen::Index>(j)) =
        1.0 + H * std::pow(t_at(j), 2.0 * H - 1.0);
  }
  Eigen::VectorXd phi_sm(static_cast<Eigen::Index>(m));
  std::vector<double> phi_full(m), svals(m);
  for (std::size_t i = 1; i <= n; ++i) {
    const double s = t_at(i);
    const double gd = g_diag_[i];
    const Eigen::VectorXd& S = unit_S_[i];
    // P1 = int_0^s R(tau,s) dtau = -H s^{2H-1} + s int_0^1 S
    const double P1 = -H * std::pow(s, 2.0 * H - 1.0) + s * mesh_integral(mesh_, S);
    G_nodes_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 - P1 / gd;
    for (std::size_t k = 0; k < m; ++k) svals[k] = mesh_[k] * s;
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double t = t_at(j);
      // P2 = -H (t-s)^{2H-1} + int_0^s kappa(r,s) Phi(r) dr - int_0^s S Phi dr,
      // Phi(r) = H [ (t-r)^{2H-1} - (s-r)^{2H-1} ]
      for (std::size_t k = 0; k < m; ++k) {
        const double sm = H * std::pow(t - svals[k], 2.0 * H - 1.0);
        phi_sm(static_cast<Eigen::Index>(k)) = sm;
        phi_full[k] = sm - H * std::pow(s - svals[k], 2.0 * H - 1.0);
      }
      const double int_kappa_phi =
          std::pow(s, 2.0 * H - 1.0) * row_at_one_.dot(phi_sm) -
          0.5 * H * H * std::pow(s, 4.0 * H - 2.0);
      double int_S_phi = 0.0;
      for (std::size_t k = 0; k + 1 < m; ++k) {
        int_S_phi += 0.5 *
                     (S(static_cast<Eigen::Index>(k)) * phi_full[k] +
                      S(static_cast<Eigen::Index>(k + 1)) * phi_full[k + 1]) *
                     (mesh_[k + 1] - mesh_[k]);
      }
      int_S_phi *= s;
      const double P2 = -H * std::pow(t - s, 2.0 * H - 1.0) + int_kappa_phi - int_S_phi;
      G_nodes_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          1.0 - (P1 + P2) / gd;
    }
  }
}

double KernelFamily::krein_ab_residual(std::size_t i, std::size_t j) const {
  if (kind_ != KernelId::kappa) throw std::logic_error("krein_ab_residual: kappa only");
  if (i == 0 || !(i < j) || j > grid_.n) throw std::invalid_argument("krein_ab_residual: need 1 <= i < j");
  const double H = params_.H;
  const double C = H * (2.0 * H - 1.0);
  const double s = t_at(i), t = t_at(j);
  const double lhs = R_at(j, s) - R_ext(t, i);

  const std::size_t m = j - i + 1;
  std::vector<double> taus(m), Sa(m), E(m), prod(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t col = i + k;
    const double tau = t_at(col);
    taus[k] = tau;
    Sa[k] = R_correction_at(col, s);
    if (col < j) {
      E[k] = R_ext(t, col) + kernel_value(t, tau);
    } else {
      E[k] = ext_kernel_cross(t, t) -
             std::pow(t, 2.0 * H - 1.0) * row_at_one_.dot(unit_S_[j]);
    }
    prod[k] = Sa[k] * E[k];
  }
  const double term1 =
      C * C * std::pow(t - s, 4.0 * H - 3.0) * beta_fn(2.0 * H - 1.0, 2.0 * H - 1.0);
  const double term2 = kappa_prodint(taus, E, s, H);
  const double term3 = kappa_prodint(taus, Sa, t, H);
  const double term4 = trapz(taus, prod);
  const double rhs = term1 - term2 - term3 + term4;
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

double KernelFamily::krein_rrr_residual(std::size_t i, std::size_t j) const {
  if (kind_ != KernelId::kappa) throw std::logic_error("krein_rrr_residual: kappa only");
  if (i == 0 || !(i < j) || j > grid_.n) throw std::invalid_argument("krein_rrr_residual: need 1 <= i < j");
  const double H = params_.H;
  const double s = t_at(i), t = t_at(j);
  const double target = kernel_value(t, s);

  const std::size_t m = i + 1;
  std::vector<double> rr(m), E2(m), E3(m), prod(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double r = t_at(k);
    rr[k] = r;
    if (k == 0) {
      E2[k] = 0.0;
      E3[k] = 0.0;
    } else if (k < i) {
      E2[k] = R_ext(t, k) + kernel_value(t, r);
      E3[k] = R_ext(s, k) + kernel_value(s, r);
    } else {  // k == i, r == s
      E2[k] = R_ext(t, k) + kernel_value(t, r);
      E3[k] = ext_kernel_cross(s, s) -
              std::pow(s, 2.0 * H - 1.0) * row_at_one_.dot(unit_S_[i]);
    }
    prod[k] = E2[k] * E3[k];
  }
  const double term1 = ext_kernel_cross(t, s);           // int_0^s k(r,s) k(r,t) dr
  const double term2 = kappa_prodint(rr, E3, t, H);      // int k(t,r) E3
  const double term3 = kappa_prodint(rr, E2, s, H);      // int k(s,r) E2
  const double term4 = trapz(rr, prod);
  const double integral = term1 - term2 - term3 + term4;
  const double lhs = -R_ext(t, i) + integral;
  return std::abs(lhs - target) / std::abs(target);
}

// ---------------------------------------------------------------------------

namespace {

// int_0^1 k(u,v) k(v,1) dv at the mesh nodes; for kappa with H <= 3/4 the
// value diverges at u = 1 and the last node takes the value at the final
// panel midpoint instead (the derivative column only feels it weakly).
Eigen::VectorXd kernel_cross_table(const UnitKernelOperator& op) {
  const std::vector<double>& mesh = op.mesh();
  const double H = op.hurst();
  const auto m = static_cast<Eigen::Index>(mesh.size());
  Eigen::VectorXd out(m);
  // all pieces integrate in the distance to the nearer singularity, keeping
  // the power factors exact for the double-exponential rule
  auto value_at = [&](double u) {
    double acc = 0.0;
    const double one_minus_u = 1.0 - u;
    if (u > 0.0) {  // v in (0,u), distance w = u - v
      auto f = [&](double w) {
        return op.kernel_dist(u, u - w, w) *
               op.kernel_dist(u - w, 1.0, one_minus_u + w);
      };
      acc += integrate_de(f, 0.0, u, 1e-10);
    }
    if (u < 1.0) {  // v in (u,1), split at the midpoint
      const double half = 0.5 * one_minus_u;
      auto f1 = [&](double w) {
        return op.kernel_dist(u, u + w, w) *
               op.kernel_dist(u + w, 1.0, one_minus_u - w);
      };
      acc += integrate_de(f1, 0.0, half, 1e-10);
      auto f2 = [&](double w) {
        return op.kernel_dist(u, 1.0 - w, one_minus_u - w) *
               op.kernel_dist(1.0 - w, 1.0, w);
      };
      acc += integrate_de(f2, 0.0, half, 1e-10);
    }
    return acc;
  };
  const bool singular_at_one =
      (op.id() == KernelId::kappa && H <= 0.76) ||
      (op.id() == KernelId::kappa_tilde && H >= 0.24);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double u = mesh[static_cast<std::size_t>(k)];
    if (k == m - 1 && singular_at_one) {
      out(k) = value_at(0.5 * (mesh[mesh.size() - 2] + 1.0));
    } else {
      out(k) = value_at(u);
    }
  }
  return out;
}

}  // namespace

KernelFamily build_family(KernelId kind, double H, double t_end, std::size_t n,
                          const FamilyOptions& opts) {
  KernelFamily fam;
  fam.params_ = constants(H);
  fam.grid_ = Grid::uniform(n, t_end);
  fam.kind_ = kind;

  if (kind == KernelId::zero) {  // H = 1/2 closed form
    fam.g_diag_.assign(n + 1, 0.5);
    fam.bracket_.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) fam.bracket_[j] = 0.5 * fam.grid_.nodes[j];
    return fam;
  }

  // The frozen-factor kernels (chi/N at panel midpoints) converge one order
  // slower than the exact-moment kappa assembly; give them a finer mesh.
  std::size_t un = opts.unit_n;
  if (un == 0) {
    un = (kind == KernelId::kappa) ? n : std::min<std::size_t>(2 * n, 2048);
  }
  un += un % 2;  // the symmetric mesh needs an even panel count
  fam.mesh_ = unit_mesh(un, opts.grading);
  fam.op_ = std::make_shared<UnitKernelOperator>(kind, H, fam.mesh_);
  ShiftedOperatorSolver solver(fam.op_->matrix());
  fam.row_at_one_ = fam.op_->weight_row(1.0);

  const auto m = static_cast<Eigen::Index>(fam.mesh_.size());
  const bool derivatives = opts.derivatives && kind != KernelId::kappa_bar_scaled;

  Eigen::VectorXd rhs_base(m);
  if (kind == KernelId::kappa) {
    rhs_base.setOnes();
  } else if (kind == KernelId::kappa_tilde) {
    rhs_base.setOnes();  // multiplied by eps per column
  } else {
    const double cH = fam.params_.c_H;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double u = fam.mesh_[static_cast<std::size_t>(k)];
      rhs_base(k) = cH * std::pow(u, 0.5 - H) * std::pow(1.0 - u, 0.5 - H);
    }
  }

  Eigen::VectorXd k2tab;
  if (derivatives) k2tab = kernel_cross_table(*fam.op_);

  fam.unit_g_.resize(n + 1);
  if (derivatives) fam.unit_S_.resize(n + 1);
  fam.scale_.assign(n + 1, 1.0);
  fam.eps_.assign(n + 1, 0.0);
  fam.g_diag_.assign(n + 1, 0.0);
  fam.bracket_.assign(n + 1, 0.0);
  fam.g_diag_[0] = (kind == KernelId::kappa_bar_scaled) ? 0.0 : 1.0;

  const double dt = fam.grid_.dt();
  for (std::size_t j = 1; j <= n; ++j) {
    const double t = fam.grid_.nodes[j];
    const double eps = (kind == KernelId::kappa) ? std::pow(t, 1.0 - 2.0 * H)
                                                 : std::pow(t, 2.0 * H - 1.0);
    fam.eps_[j] = eps;
    Eigen::VectorXd rhs = rhs_base;
    if (kind == KernelId::kappa_tilde) rhs *= eps;
    Eigen::VectorXd a = solver.solve(eps, rhs);
    const double scale = (kind == KernelId::kappa) ? eps : 1.0;
    fam.scale_[j] = scale;
    fam.g_diag_[j] = scale * a(m - 1);
    fam.unit_g_[j] = std::move(a);

    if (derivatives) {
      const double gd = fam.g_diag_[j];
      if (!(gd > 0.0)) {
        throw SolverError("kernel family: nonpositive diagonal value g(t,t)");
      }
      Eigen::VectorXd e = solver.solve(eps, (gd / (t * eps)) * k2tab);
      fam.unit_S_[j] = e / gd;
    }

    double br = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      br += fam.g_at(j, (static_cast<double>(i) + 0.5) * dt);
    }
    fam.bracket_[j] = br * dt;
  }

  if (kind == KernelId::kappa_tilde) {
    const UnitKernelOperator& op = *fam.op_;
    auto f2 = [&](double v) {
      const double k = op.kernel(v, 1.0);
      return k * k;
    };
    fam.cchi2_ = integrate_de(f2, 0.0, 1.0, 1e-10);
  }

  if (derivatives && kind == KernelId::kappa) fam.build_G_nodes();
  return fam;
}

KernelFamily solve_g_family(double H, double t_end, std::size_t n,
                            const FamilyOptions& opts) {
  if (!(H > 0.0) || !(H <= 1.0)) throw std::domain_error("solve_g_family: H outside (0,1]");
  KernelId kind = KernelId::kappa;
  if (H == 0.5) kind = KernelId::zero;
  else if (H < 0.5) kind = KernelId::kappa_bar_scaled;
  return build_family(kind, H, t_end, n, opts);
}

KernelFamily solve_g_tilde_family(double H, double t_end, std::size_t n,
                                  const FamilyOptions& opts) {
  if (!(H > 0.0) || !(H < 0.5)) {
    throw std::domain_error("solve_g_tilde_family: requires 0 < H < 1/2");
  }
  return build_family(KernelId::kappa_tilde, H, t_end, n, opts);
}

GColumn solve_g(double H, double t, std::size_t n) {
  if (!(H > 0.0) || !(H <= 1.0)) throw std::domain_error("solve_g: H outside (0,1]");
  if (!(t > 0.0)) throw std::domain_error("solve_g: t must be positive");
  GColumn col;
  col.nodes.resize(n + 1);
  col.values.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    col.nodes[i] = t * static_cast<double>(i) / static_cast<double>(n);
  }
  if (H == 0.5) {
    std::fill(col.values.begin(), col.values.end(), 0.5);
    col.g_tt = 0.5;
    return col;
  }
  FamilyOptions opts;
  opts.derivatives = false;
  const std::vector<double> mesh = unit_mesh(n + n % 2, opts.grading);
  const KernelId kind = (H > 0.5) ? KernelId::kappa : KernelId::kappa_bar_scaled;
  UnitKernelOperator op(kind, H, mesh);
  const auto m = static_cast<Eigen::Index>(mesh.size());
  const double eps = (H > 0.5) ? std::pow(t, 1.0 - 2.0 * H) : std::pow(t, 2.0 * H - 1.0);
  Eigen::MatrixXd A = op.matrix();
  A.diagonal().array() += eps;
  Eigen::VectorXd b(m);
  if (H > 0.5) {
    b.setOnes();
  } else {
    const double cH = constants(H).c_H;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double u = mesh[static_cast<std::size_t>(k)];
      b(k) = cH * std::pow(u, 0.5 - H) * std::pow(1.0 - u, 0.5 - H);
    }
  }
  const Eigen::VectorXd a = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(b);
  const double scale = (H > 0.5) ? eps : 1.0;
  for (std::size_t i = 0; i <= n; ++i) {
    col.values[i] = scale * pl_interp(mesh, a, static_cast<double>(i) / static_cast<double>(n));
  }
  col.g_tt = scale * a(m - 1);
  return col;
}

double UnitSolution::integral() const {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
    acc += 0.5 * (values(static_cast<Eigen::Index>(k)) + values(static_cast<Eigen::Index>(k + 1))) *
           (mesh[k + 1] - mesh[k]);
  }
  return acc;
}

UnitSolution solve_g_eps(double H, double eps, std::size_t n) {
  if (!(H > 0.0) || H == 0.5 || !(H <= 1.0)) {
    throw std::domain_error("solve_g_eps: H outside (0,1/2)u(1/2,1]");
  }
  if (eps < 0.0) throw std::domain_error("solve_g_eps: eps must be >= 0");
  UnitSolution sol;
  sol.mesh = unit_mesh(n + n % 2);
  const auto m = static_cast<Eigen::Index>(sol.mesh.size());
  if (eps == 0.0) {
    sol.values.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double u = sol.mesh[static_cast<std::size_t>(k)];
      sol.values(k) = (H > 0.5) ? g_limit(H, u) : 1.0;
    }
    return sol;
  }
  const KernelId kind = (H > 0.5) ? KernelId::kappa : KernelId::kappa_bar_scaled;
  UnitKernelOperator op(kind, H, sol.mesh);
  Eigen::MatrixXd A = op.matrix();
  A.diagonal().array() += eps;
  Eigen::VectorXd b(m);
  if (H > 0.5) {
    b.setOnes();
  } else {
    const double cH = constants(H).c_H;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double u = sol.mesh[static_cast<std::size_t>(k)];
      b(k) = cH * std::pow(u, 0.5 - H) * std::pow(1.0 - u, 0.5 - H);
    }
  }
  sol.values = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(b);
  return sol;
}

double g_limit(double H, double u) {
  if (!(H > 0.5) || !(H < 1.0)) throw std::domain_error("g_limit: requires 1/2 < H < 1");
  return constants(H).c_H * std::pow(u, 0.5 - H) * std::pow(1.0 - u, 0.5 - H);
}

}  // namespace mfbm
