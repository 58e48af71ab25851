#include "mfbm/grid.hpp"

#include <stdexcept>

namespace mfbm {

Grid Grid::uniform(std::size_t n, double t_end) {
  if (n < 8) throw std::invalid_argument("Grid: need at least 8 panels");
  if (n > 4096) throw std::invalid_argument("Grid: n capped at 4096 (dense solver scale)");
  if (!(t_end > 0.0)) throw std::invalid_argument("Grid: t_end must be positive");
  Grid g;
  g.n = n;
  g.t_end = t_end;
  g.nodes.resize(n + 1);
  g.unit_nodes.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    g.unit_nodes[i] = static_cast<double>(i) / static_cast<double>(n);
    g.nodes[i] = g.unit_nodes[i] * t_end;
  }
  g.nodes[n] = t_end;
  g.unit_nodes[n] = 1.0;
  return g;
}

}  // namespace mfbm
