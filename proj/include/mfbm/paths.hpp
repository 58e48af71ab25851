#ifndef MFBM_PATHS_HPP
#define MFBM_PATHS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "mfbm/grid.hpp"

namespace mfbm {

// A batch of exactly simulated trajectories on a common grid.  Rows are
// paths, columns grid nodes; all processes start at zero.  Y is present only
// when a drift was requested.
struct PathSample {
  Grid grid;
  double H = 0.5;
  std::uint64_t seed = 0;
  std::optional<double> theta;
  Eigen::MatrixXd B;   // standard Brownian component
  Eigen::MatrixXd BH;  // fractional component
  Eigen::MatrixXd X;   // mixed process B + B^H
  Eigen::MatrixXd Y;   // theta*t + X, empty unless theta

  std::size_t n_paths() const { return static_cast<std::size_t>(X.rows()); }
};

// How the fBm increments are drawn.  Both are exact in distribution:
//   cholesky   dense factorization of the increment covariance (default)
//   circulant  Davies-Harte spectral embedding, O(n log n) per path; needs a
//              power-of-two panel count
enum class FbmSampler { cholesky, circulant };

// Exact Gaussian simulation: fBm increments from a Cholesky factor of their
// covariance (computed once per call and shared across paths), independent
// N(0,dt) increments for B.  Path p draws from Philox substream (seed, p):
// first the fBm normals, then the n Brownian normals.  Bit-identical output
// for identical (seed, H, grid, n_paths, theta, sampler).
PathSample simulate(double H, const Grid& grid, std::size_t n_paths,
                    std::uint64_t seed, std::optional<double> theta = std::nullopt,
                    FbmSampler sampler = FbmSampler::cholesky);

// p-variation sums over dyadic refinements of [0, t_end]:
//   sums[l] = sum_k |X_{(k+1) T/2^l} - X_{k T/2^l}|^p,  l = levels[k].
// The grid panel count must be divisible by 2^max_level.
struct VariationReport {
  double p = 2.0;
  std::vector<int> levels;
  std::vector<double> sums;
};
VariationReport variation_diagnostic(const Grid& grid, const Eigen::VectorXd& values,
                                     double p, int max_level);

}  // namespace mfbm

#endif
