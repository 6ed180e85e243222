#pragma once

#include <Eigen/Core>

namespace fracheat {

/// Uniform grid of interior nodes on an open interval (x_left, x_right).
///
/// Nodes are x_i = x_left + (i+1)*h for i = 0..n-1 with h = (x_right-x_left)/(n+1),
/// so the first and last node sit one mesh width away from the boundary.
/// Immutable after construction.
struct Grid1D {
  double x_left = -1.0;
  double x_right = 1.0;
  int n = 0;
  double h = 0.0;
  Eigen::VectorXd nodes;

  double node(int i) const { return nodes[i]; }

  /// Distance from node i to the nearest endpoint (always > 0).
  double distance(int i) const;

  /// max |x| over the closed interval; the R of the theta bound.
  double radius() const;
};

/// Builds the grid; throws std::invalid_argument for n < 4 or a degenerate
/// interval.
Grid1D make_grid(double x_left, double x_right, int n);

/// Bounds-checked distance lookup (throws std::out_of_range).
double distance(const Grid1D& g, int i);

/// Midpoint-rule inner product <u,v>_h = h * sum_i u_i v_i.
inline double inner_h(const Grid1D& g, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& v) {
  return g.h * u.dot(v);
}

inline double norm_h(const Grid1D& g, const Eigen::VectorXd& u) {
  return std::sqrt(g.h) * u.norm();
}

}  // namespace fracheat
