#include "mfbm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfbm/quadrature.hpp"

namespace mfbm {

namespace {

constexpr double kQuadTol = 1e-11;

double require_small_H(double H, const char* who) {
  if (!(H > 0.0) || !(H < 0.5)) {
    throw std::domain_error(std::string(who) + ": requires 0 < H < 1/2");
  }
  return H;
}

// int over (a,b) with an optional interior split point to help the
// double-exponential rule when the integrand has two active scales.
double de_split(const std::function<double(double)>& f, double a, double b,
                double split) {
  if (split > a && split < b) {
    return integrate_de(f, a, split, kQuadTol) + integrate_de(f, split, b, kQuadTol);
  }
  return integrate_de(f, a, b, kQuadTol);
}

}  // namespace

double kappa(double H, double s, double r) {
  if (!(H > 0.5) || !(H <= 1.0)) throw std::domain_error("kappa: requires 1/2 < H <= 1");
  if (s < 0.0 || r < 0.0) throw std::domain_error("kappa: negative argument");
  if (s == r) throw std::domain_error("kappa: singular on the diagonal");
  return H * (2.0 * H - 1.0) * std::pow(std::abs(s - r), 2.0 * H - 2.0);
}

double kappa_bar_N(double H, double u, double v) {
  require_small_H(H, "kappa_bar_N");
  if (!(u > 0.0) || !(v > 0.0) || !(u < 1.0) || !(v < 1.0)) {
    throw std::domain_error("kappa_bar_N: arguments must lie in (0,1)");
  }
  const double up = u / (1.0 - u);
  const double vp = v / (1.0 - v);
  const double c = std::min(up, vp) / std::max(up, vp);
  const double p = -0.5 - H;
  const double q = 2.0 * H - 1.0;
  auto f = [&](double y) { return std::pow(y, p) * std::pow(1.0 - c * y, q); };
  const double integral = de_split(f, 0.0, 1.0, 0.5);
  return std::pow(c, 0.5 - H) * integral;
}

double kappa_bar(double H, double u, double v) {
  require_small_H(H, "kappa_bar");
  if (u < 0.0 || v < 0.0 || u > 1.0 || v > 1.0) {
    throw std::domain_error("kappa_bar: arguments outside [0,1]");
  }
  if (u == 0.0 || v == 0.0 || u == 1.0 || v == 1.0) return 0.0;
  if (u == v) throw std::domain_error("kappa_bar: singular on the diagonal");
  return std::pow(std::abs(u - v), -2.0 * H) * kappa_bar_N(H, u, v);
}

double chi_fn(const HurstParams& p, double u) {
  require_small_H(p.H, "chi_fn");
  if (u < 0.0 || u > 1.0) throw std::domain_error("chi_fn: argument outside [0,1]");
  if (u == 0.0) return 0.0;
  const double H = p.H;
  if (u == 1.0) {
    // L(inf) = B(1/2-H, 2H)
    const double logB = std::lgamma(0.5 - H) + std::lgamma(2.0 * H) - std::lgamma(0.5 + H);
    return p.beta_H * std::exp(logB);
  }
  const double v = u / (1.0 - u);
  auto f = [&](double r) {
    const double tail = std::max(1.0 - r / v, 0.0);
    return std::pow(r, -0.5 - H) * std::pow(1.0 + r, -0.5 - H) *
           std::pow(tail, 1.0 - 2.0 * H);
  };
  double L = 0.0;
  if (v <= 1.0) {
    L = de_split(f, 0.0, v, 0.5 * v);
  } else {
    L = integrate_de(f, 0.0, 1.0, kQuadTol);
    const double mid = std::sqrt(v);
    L += de_split(f, 1.0, v, mid);
  }
  return p.beta_H * std::pow(u, 0.5 - H) * L;
}

double chi_fn(double H, double u) { return chi_fn(constants(H), u); }

double kappa_tilde(double H, double s, double t) {
  require_small_H(H, "kappa_tilde");
  if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("kappa_tilde: arguments must be positive");
  if (s == t) throw std::domain_error("kappa_tilde: singular on the diagonal");
  const double ratio = std::min(s, t) / std::max(s, t);
  return std::pow(std::abs(t - s), -2.0 * H) * chi_fn(H, ratio);
}

double rho_tilde(double H, double s, double t) {
  require_small_H(H, "rho_tilde");
  if (s < 0.0 || s > t) throw std::domain_error("rho_tilde: requires 0 <= s <= t");
  if (s == t || s == 0.0) return 0.0;
  const double beta_H = constants(H).beta_H;
  // distance variable u = tau - s keeps the endpoint singularity exact
  auto f = [&](double u) {
    return std::pow(s + u, H - 0.5) * std::pow(u, -0.5 - H);
  };
  const double L = t - s;
  const double integral = de_split(f, 0.0, L, std::min(s, 0.5 * L));
  return std::sqrt(beta_H) * std::pow(s, 0.5 - H) * integral;
}

double rho_tilde_dot(double H, double s, double t) {
  require_small_H(H, "rho_tilde_dot");
  if (!(s > 0.0) || !(t > s)) throw std::domain_error("rho_tilde_dot: requires 0 < s < t");
  const double beta_H = constants(H).beta_H;
  return std::sqrt(beta_H) * std::pow(s, 0.5 - H) * std::pow(t, H - 0.5) *
         std::pow(t - s, -0.5 - H);
}

double rho(double H, double s, double t) {
  if (!(H > 0.0) || !(H < 1.0)) throw std::domain_error("rho: H outside (0,1)");
  if (!(s > 0.0) || s > t) throw std::domain_error("rho: requires 0 < s <= t");
  if (s == t && H >= 0.5) return 0.0;
  const HurstParams p = constants(H);
  // rho = sqrt((2-2H)/lambda_H) s^{1/2-H} K_1(s,t); the numeric inversion
  // identity int_r^t rho(s,t) d/ds rho~(r,s) ds = 1 pins the normalization
  const double pref =
      2.0 * H * std::sqrt((2.0 - 2.0 * H) / p.lambda_H) * std::pow(s, 0.5 - H);
  // K_1(s,t)/(2H) = t^{H-1/2}(t-s)^{H-1/2} - (H-1/2) int_s^t r^{H-3/2}(r-s)^{H-1/2} dr
  const double boundary = std::pow(t, H - 0.5) * std::pow(t - s, H - 0.5);
  double integral = 0.0;
  if (t > s) {
    auto f = [&](double u) {
      return std::pow(s + u, H - 1.5) * std::pow(u, H - 0.5);
    };
    const double L = t - s;
    integral = de_split(f, 0.0, L, std::min(s, 0.5 * L));
  }
  return pref * (boundary - (H - 0.5) * integral);
}

}  // namespace mfbm
