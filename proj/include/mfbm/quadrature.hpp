#ifndef MFBM_QUADRATURE_HPP
#define MFBM_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace mfbm {

// Nodes/weights of a quadrature rule on [0,1].
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double apply(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

// Gauss-Jacobi rule on [0,1] for the weight x^beta (1-x)^alpha, alpha,beta > -1,
// built by Golub-Welsch from the Jacobi three-term recurrence.  The returned
// weights absorb the singular weight function: sum w_i f(x_i) ~ int_0^1
// x^beta (1-x)^alpha f(x) dx for smooth f.
QuadRule gauss_jacobi_01(double alpha, double beta, std::size_t npoints);

// Gauss-Legendre on [0,1] (alpha = beta = 0 shortcut).
QuadRule gauss_legendre_01(std::size_t npoints);

// Adaptive quadrature of f over (a,b).  Uses a double-exponential (tanh-sinh)
// rule, which tolerates integrable endpoint singularities.
double integrate_de(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12);

// Adaptive Gauss-Kronrod for smooth integrands over [a,b].
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12);

}  // namespace mfbm

#endif
