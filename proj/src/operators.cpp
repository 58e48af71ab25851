#include "mfbm/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "mfbm/quadrature.hpp"

namespace mfbm {

namespace {

constexpr std::size_t kNodes = 64;

double deriv(const RealFn& f, const RealFn& fprime, double x) {
  if (fprime) return fprime(x);
  const double h = std::max(1e-6, 1e-4 * x);
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

void check_finite(double v, const char* who) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite integrand value");
}

}  // namespace

double operator_K(double H, const RealFn& f, double s, double t, const RealFn& fprime) {
  if (!(H > 0.0) || !(H < 1.0)) throw std::domain_error("operator_K: H outside (0,1)");
  if (!(s >= 0.0) || !(s <= t)) throw std::domain_error("operator_K: requires 0 <= s <= t");
  if (s == t) {
    if (H > 0.5) return 0.0;  // (r-s)^{H-1/2} vanishes at the shrinking endpoint
    throw std::domain_error("operator_K: s == t not defined for H < 1/2");
  }
  if (H == 0.5) return f(s);
  const double L = t - s;
  if (H > 0.5) {
    // K_f(s,t) = 2H(H-1/2) int_s^t f(r) r^{H-1/2} (r-s)^{H-3/2} dr
    const QuadRule rule = gauss_jacobi_01(0.0, H - 1.5, kNodes);
    const double integral = rule.apply([&](double x) {
      const double r = s + L * x;
      const double v = f(r) * std::pow(r, H - 0.5);
      check_finite(v, "operator_K");
      return v;
    });
    return 2.0 * H * (H - 0.5) * std::pow(L, H - 0.5) * integral;
  }
  // H < 1/2: boundary-term form with phi(r) = f(r) r^{H-1/2},
  // K_f(s,t) = 2H [ phi(t) (t-s)^{H-1/2} - int_s^t phi'(r) (r-s)^{H-1/2} dr ].
  const double phi_t = f(t) * std::pow(t, H - 0.5);
  check_finite(phi_t, "operator_K");
  const QuadRule rule = gauss_jacobi_01(0.0, H - 0.5, kNodes);
  const double integral = rule.apply([&](double x) {
    const double r = s + L * x;
    const double v = deriv(f, fprime, r) * std::pow(r, H - 0.5) +
                     f(r) * (H - 0.5) * std::pow(r, H - 1.5);
    check_finite(v, "operator_K");
    return v;
  });
  return 2.0 * H * (phi_t * std::pow(L, H - 0.5) - std::pow(L, H + 0.5) * integral);
}

double operator_Q(double H, const RealFn& f, double s, const RealFn& fprime) {
  if (!(H > 0.0) || !(H < 1.0)) throw std::domain_error("operator_Q: H outside (0,1)");
  if (!(s > 0.0)) throw std::domain_error("operator_Q: requires s > 0");
  // With r = s w:  int_0^s f r^{1/2-H} (s-r)^{1/2-H} dr = s^{2-2H} J(s),
  //   J(s)  = int_0^1 f(sw) w^{1/2-H} (1-w)^{1/2-H} dw,
  //   J'(s) = int_0^1 f'(sw) w^{3/2-H} (1-w)^{1/2-H} dw,
  // so Q_f(s) = (2-2H) s^{1-2H} J(s) + s^{2-2H} J'(s).
  const QuadRule rJ = gauss_jacobi_01(0.5 - H, 0.5 - H, kNodes);
  const double J = rJ.apply([&](double w) {
    const double v = f(s * w);
    check_finite(v, "operator_Q");
    return v;
  });
  const QuadRule rJp = gauss_jacobi_01(0.5 - H, 1.5 - H, kNodes);
  const double Jp = rJp.apply([&](double w) {
    const double v = deriv(f, fprime, s * w);
    check_finite(v, "operator_Q");
    return v;
  });
  return (2.0 - 2.0 * H) * std::pow(s, 1.0 - 2.0 * H) * J + std::pow(s, 2.0 - 2.0 * H) * Jp;
}

}  // namespace mfbm
