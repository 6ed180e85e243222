#pragma once

#include <Eigen/Core>

#include "fracheat/grid.hpp"
#include "fracheat/operator.hpp"

namespace fracheat {

/// Full eigendecomposition of the assembled operator.
///
/// Columns of Phi are orthonormal under the h-inner product, eigenvalues
/// ascend, and each column is sign-normalized so its largest-magnitude entry
/// is positive.  traces holds the extrapolated boundary values of phi_k/d^a
/// (filled when the grid admits the 4-node stencil, n >= 8).
struct EigenBasis {
  double a = 0.0;
  Grid1D grid;
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd Phi;
  Eigen::MatrixXd traces;  // n x 2, columns: left, right

  int n() const { return static_cast<int>(lambdas.size()); }

  /// Eigen-coefficients of a nodal vector: c = h Phi^T f.
  Eigen::VectorXd project(const Eigen::VectorXd& f) const {
    return grid.h * (Phi.transpose() * f);
  }
  /// Nodal values from eigen-coefficients.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& c) const { return Phi * c; }

  double trace_of(int k, int side) const { return traces(k, side); }
};

EigenBasis eigendecompose(const FracOperator& op);

/// Least-squares slope of log lambda_k against log k over [k_min, k_max]
/// (1-based mode indices).  Expected near 2a in one dimension.
double weyl_slope(const EigenBasis& basis, int k_min, int k_max);

/// 1 / lambda_1 of the potential-free operator on g; the constant in the
/// discrete Poincare inequality ||u||_h^2 <= C <u, A0 u>_h.
double poincare_constant(double a, const Grid1D& g);

/// Admissible-smallness threshold for the potential.
struct ThetaBound {
  double C_HS = 0.0;
  double R = 0.0;
  int N = 1;
  double theta_max = 0.0;  // (1/2) (1 + C_HS (N/2 + R))^-1

  /// True iff q is nonnegative with sup|q|, sup|q'| <= theta and
  /// theta < theta_max (strict).
  bool accepts(const PotentialSpec& q, double theta) const;
};

ThetaBound theta_bound(double C_HS, int N, double R);

}  // namespace fracheat
