#ifndef MFBM_GRID_HPP
#define MFBM_GRID_HPP

#include <cstddef>
#include <vector>

namespace mfbm {

// Uniform output grid on [0, t_end] with n panels (n+1 nodes).
struct Grid {
  std::size_t n = 0;
  double t_end = 0.0;
  std::vector<double> nodes;       // strictly increasing, nodes[0]=0, nodes[n]=t_end
  std::vector<double> unit_nodes;  // nodes / t_end

  // Throws std::invalid_argument for n < 8 (too few panels to resolve the
  // kernels) or a non-positive horizon.  n is capped at 4096: the dense
  // solves behind the grid are O(n^3).
  static Grid uniform(std::size_t n, double t_end);

  double dt() const { return t_end / static_cast<double>(n); }
  double midpoint(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dt(); }

  bool operator==(const Grid& other) const {
    return n == other.n && t_end == other.t_end;
  }
};

}  // namespace mfbm

#endif
