#include "mfbm/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <stdexcept>

namespace mfbm {

QuadRule gauss_jacobi_01(double alpha, double beta, std::size_t npoints) {
  if (alpha <= -1.0 || beta <= -1.0) {
    throw std::domain_error("gauss_jacobi_01: weight exponents must exceed -1");
  }
  if (npoints == 0) throw std::invalid_argument("gauss_jacobi_01: npoints == 0");
  const std::size_t n = npoints;
  const double a = alpha, b = beta;

  // Jacobi recurrence on [-1,1] with weight (1-x)^a (1+x)^b:
  //   p_{k+1} = (x - a_k) p_k - b_k p_{k-1}
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    double ak;
    if (k == 0) {
      ak = (b - a) / (a + b + 2.0);
    } else {
      const double den = (2.0 * kk + a + b) * (2.0 * kk + a + b + 2.0);
      ak = (b * b - a * a) / den;
    }
    J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = ak;
    if (k + 1 < n) {
      const double k1 = kk + 1.0;
      double bk;
      if (k == 0) {
        bk = 4.0 * (a + 1.0) * (b + 1.0) /
             ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
      } else {
        const double t = 2.0 * k1 + a + b;
        bk = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) /
             (t * t * (t + 1.0) * (t - 1.0));
      }
      const double off = std::sqrt(bk);
      J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = off;
      J(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = off;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("gauss_jacobi_01: eigensolver failed");
  }
  // mu0 = int_{-1}^1 (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
  const double log_mu0 = (a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                         std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0);
  const double mu0 = std::exp(log_mu0);

  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Map [-1,1] -> [0,1]; the interval weight picks up 2^{-(a+b+1)}.
  const double scale = std::exp(-(a + b + 1.0) * std::log(2.0)) * mu0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = es.eigenvalues()(static_cast<Eigen::Index>(i));
    const double v0 = es.eigenvectors()(0, static_cast<Eigen::Index>(i));
    rule.nodes[i] = 0.5 * (1.0 + x);
    rule.weights[i] = scale * v0 * v0;
  }
  return rule;
}

QuadRule gauss_legendre_01(std::size_t npoints) {
  return gauss_jacobi_01(0.0, 0.0, npoints);
}

double integrate_de(const std::function<double(double)>& f, double a, double b,
                    double tol) {
  if (!(b > a)) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, tol);
}

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol);
}

}  // namespace mfbm
