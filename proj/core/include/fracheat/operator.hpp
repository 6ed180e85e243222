#pragma once

#include <Eigen/Core>
#include <filesystem>

#include "fracheat/grid.hpp"

namespace fracheat {

/// Potential q sampled at the grid nodes, plus the bounds the smallness
/// condition needs.  grad_values uses central differences in the interior and
/// one-sided stencils at the first/last node.
struct PotentialSpec {
  Eigen::VectorXd values;
  Eigen::VectorXd grad_values;
  bool nonneg = true;
  double sup_q = 0.0;
  double sup_grad_q = 0.0;

  static PotentialSpec zero(const Grid1D& g);
  static PotentialSpec from_values(const Grid1D& g, Eigen::VectorXd q);
  /// CSV with header `x,q`, linearly interpolated onto the grid; zero outside
  /// the file's x-range.
  static PotentialSpec from_csv(const Grid1D& g, const std::filesystem::path& p);
};

/// Dense symmetric discretization of the restricted fractional Laplacian
/// (-Delta)^a plus a potential, with homogeneous exterior condition.
///
/// Off-diagonals are -h^(-2a) K(|i-j|); the diagonal carries the full lattice
/// sum S(a) = 2 sum_m K(m) in closed form, so the exterior-zero condition is
/// built in exactly.
struct FracOperator {
  double a = 0.75;
  Grid1D grid;
  Eigen::VectorXd q;
  Eigen::MatrixXd A;
  Eigen::VectorXd kernel_weights;  // K(1..n)
  double diag_sum = 0.0;           // S(a)

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return A * u; }
};

/// Lattice kernel weight K(m) = C(a) Gamma(m-a)/Gamma(m+1+a) with
/// C(a) = 4^a Gamma(1/2+a) / (sqrt(pi) |Gamma(-a)|).  Positive, strictly
/// decreasing, K(m) ~ const * m^(-1-2a).
double kernel_weight(double a, long m);

/// First `count` kernel weights by the exact ratio recurrence
/// K(m+1) = K(m) (m-a)/(m+1+a).
Eigen::VectorXd kernel_weights(double a, int count);

/// S(a) = 2 sum_{m>=1} K(m) in closed form.
double diagonal_sum(double a);

/// Assembles the dense operator; throws std::invalid_argument on a outside
/// (0,1) or a dimension mismatch.
FracOperator assemble(double a, const Grid1D& g, const PotentialSpec& q);

}  // namespace fracheat
