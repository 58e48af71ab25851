#include "mfbm/paths.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mfbm/covariance.hpp"
#include "mfbm/errors.hpp"
#include "mfbm/rng.hpp"

namespace mfbm {

namespace {

// in-place radix-2 FFT with the e^{-2 pi i / M} convention
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t m = a.size();
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < m; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// circulant eigenvalues of the stationary fBm increment autocovariance
std::vector<double> circulant_eigenvalues(double H, std::size_t n, double dt) {
  const std::size_t m = 2 * n;
  auto gamma = [&](std::size_t k) {
    const double kk = static_cast<double>(k);
    return 0.5 * std::pow(dt, 2.0 * H) *
           (std::pow(kk + 1.0, 2.0 * H) + std::pow(std::abs(kk - 1.0), 2.0 * H) -
            2.0 * std::pow(kk, 2.0 * H));
  };
  std::vector<std::complex<double>> c(m);
  for (std::size_t k = 0; k <= n; ++k) c[k] = gamma(k);
  for (std::size_t k = n + 1; k < m; ++k) c[k] = c[m - k];
  fft(c);
  std::vector<double> lambda(m);
  double max_l = 0.0;
  for (std::size_t k = 0; k < m; ++k) max_l = std::max(max_l, c[k].real());
  for (std::size_t k = 0; k < m; ++k) {
    const double l = c[k].real();
    if (l < -1e-10 * max_l) {
      throw SolverError("simulate: circulant embedding is not nonnegative definite");
    }
    lambda[k] = std::max(l, 0.0);
  }
  return lambda;
}

}  // namespace

PathSample simulate(double H, const Grid& grid, std::size_t n_paths,
                    std::uint64_t seed, std::optional<double> theta,
                    FbmSampler sampler) {
  if (!(H > 0.0) || !(H < 1.0)) throw std::domain_error("simulate: H outside (0,1)");
  if (n_paths < 1) throw std::invalid_argument("simulate: n_paths >= 1");
  if (sampler == FbmSampler::circulant && (grid.n & (grid.n - 1)) != 0) {
    throw std::invalid_argument("simulate: circulant sampler needs a power-of-two grid");
  }

  const auto n = static_cast<Eigen::Index>(grid.n);
  Eigen::MatrixXd L;
  std::vector<double> lambda;
  if (sampler == FbmSampler::cholesky) {
    Eigen::MatrixXd C = fbm_increment_covariance(H, grid.nodes);
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) {
      C.diagonal().array() += 1e-12;
      llt.compute(C);
      if (llt.info() != Eigen::Success) {
        throw SolverError("simulate: increment covariance not positive definite");
      }
    }
    L = llt.matrixL();
  } else {
    lambda = circulant_eigenvalues(H, grid.n, grid.dt());
  }

  PathSample out;
  out.grid = grid;
  out.H = H;
  out.seed = seed;
  out.theta = theta;
  const auto np = static_cast<Eigen::Index>(n_paths);
  out.B.setZero(np, n + 1);
  out.BH.setZero(np, n + 1);
  out.X.setZero(np, n + 1);
  if (theta) out.Y.setZero(np, n + 1);

  const double sdt = std::sqrt(grid.dt());
  const std::size_t m = 2 * grid.n;
  Eigen::VectorXd z(n), dbh(n);
  std::vector<std::complex<double>> spec(m);
  for (Eigen::Index p = 0; p < np; ++p) {
    Philox4x32 rng(seed, static_cast<std::uint64_t>(p));
    if (sampler == FbmSampler::cholesky) {
      for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
      dbh.noalias() = L * z;
    } else {
      const double dm = static_cast<double>(m);
      spec[0] = std::sqrt(lambda[0] / dm) * rng.normal();
      spec[grid.n] = std::sqrt(lambda[grid.n] / dm) * rng.normal();
      for (std::size_t k = 1; k < grid.n; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        const double amp = std::sqrt(lambda[k] / (2.0 * dm));
        spec[k] = std::complex<double>(amp * re, amp * im);
        spec[m - k] = std::conj(spec[k]);
      }
      fft(spec);
      for (Eigen::Index i = 0; i < n; ++i) dbh(i) = spec[static_cast<std::size_t>(i)].real();
    }
    double b = 0.0, bh = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      b += sdt * rng.normal();
      bh += dbh(i);
      out.B(p, i + 1) = b;
      out.BH(p, i + 1) = bh;
      out.X(p, i + 1) = b + bh;
    }
    if (theta) {
      for (Eigen::Index i = 0; i <= n; ++i) {
        out.Y(p, i) = *theta * grid.nodes[static_cast<std::size_t>(i)] + out.X(p, i);
      }
    }
  }
  return out;
}

VariationReport variation_diagnostic(const Grid& grid, const Eigen::VectorXd& values,
                                     double p, int max_level) {
  if (!(p > 0.0)) throw std::domain_error("variation_diagnostic: p must be positive");
  if (max_level < 1) throw std::invalid_argument("variation_diagnostic: max_level >= 1");
  if (values.size() != static_cast<Eigen::Index>(grid.n + 1)) {
    throw std::invalid_argument("variation_diagnostic: values do not match grid");
  }
  const std::size_t blocks = std::size_t{1} << static_cast<unsigned>(max_level);
  if (grid.n % blocks != 0) {
    throw std::invalid_argument(
        "variation_diagnostic: grid panels must be divisible by 2^max_level");
  }
  VariationReport rep;
  rep.p = p;
  for (int l = 1; l <= max_level; ++l) {
    const std::size_t m = std::size_t{1} << static_cast<unsigned>(l);
    const std::size_t stride = grid.n / m;
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = values(static_cast<Eigen::Index>((k + 1) * stride)) -
                       values(static_cast<Eigen::Index>(k * stride));
      acc += std::pow(std::abs(d), p);
    }
    rep.levels.push_back(l);
    rep.sums.push_back(acc);
  }
  return rep;
}

}  // namespace mfbm
