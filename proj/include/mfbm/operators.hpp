#ifndef MFBM_OPERATORS_HPP
#define MFBM_OPERATORS_HPP

#include <functional>

namespace mfbm {

using RealFn = std::function<double(double)>;

// The fractional operators of the inner-product identity
//   int_0^t phi psi ds = c_H int_0^t K_phi(s,t) Q_psi(s) ds:
//
//   K_f(s,t) = -2H d/ds int_s^t f(r) r^{H-1/2} (r-s)^{H-1/2} dr
//   Q_f(s)   =     d/ds int_0^s f(r) r^{1/2-H} (s-r)^{1/2-H} dr
//
// The s-derivative is carried out analytically (differentiation under the
// integral for H > 1/2, boundary-term form for H < 1/2), leaving Gauss-Jacobi
// quadratures matched to the known endpoint exponents.  Where a derivative of
// f is required it is taken from `fprime` when supplied, otherwise from a
// centered difference with step max(1e-6, 1e-4 r).

double operator_K(double H, const RealFn& f, double s, double t,
                  const RealFn& fprime = nullptr);

double operator_Q(double H, const RealFn& f, double s,
                  const RealFn& fprime = nullptr);

}  // namespace mfbm

#endif
