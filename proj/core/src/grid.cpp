#include "fracheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracheat {

double Grid1D::distance(int i) const {
  const double x = nodes[i];
  return std::min(x - x_left, x_right - x);
}

double Grid1D::radius() const {
  return std::max(std::fabs(x_left), std::fabs(x_right));
}

Grid1D make_grid(double x_left, double x_right, int n) {
  if (!(x_left < x_right))
    throw std::invalid_argument("make_grid: requires x_left < x_right");
  if (n < 4)
    throw std::invalid_argument("make_grid: requires n >= 4 interior nodes");
  Grid1D g;
  g.x_left = x_left;
  g.x_right = x_right;
  g.n = n;
  g.h = (x_right - x_left) / static_cast<double>(n + 1);
  g.nodes.resize(n);
  for (int i = 0; i < n; ++i) g.nodes[i] = x_left + (i + 1) * g.h;
  return g;
}

double distance(const Grid1D& g, int i) {
  if (i < 0 || i >= g.n) throw std::out_of_range("distance: node index");
  return g.distance(i);
}

}  // namespace fracheat
