#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fracheat/grid.hpp"
#include "fracheat/operator.hpp"

namespace fracheat {

enum class Side { left, right };

struct EigenBasis;  // spectral.hpp

/// Extrapolated boundary limit of u / d^power at the given side.
///
/// Fits a quadratic in the distance d through the 4 nodes nearest that side
/// and evaluates the fit at d = 0.  power is a or a-1 in practice.
/// Requires n >= 8 so the stencil stays on one side of the midpoint.
double boundary_trace(const Grid1D& g, const Eigen::VectorXd& u, Side side,
                      double power);

/// Two-sided residual record for an integral identity, optionally across a
/// refinement sequence.
struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs-rhs| / max(|lhs|,|rhs|,floor)
  std::vector<int> grid_sizes;
  std::vector<double> residuals;
  double estimated_order = 0.0;  // mean log2 ratio of successive residuals
  std::string warning;
};

/// Relative residual with an absolute floor against 0/0.
double relative_residual(double lhs, double rhs);

/// Central-difference gradient, one-sided at the first and last node.
Eigen::VectorXd gradient_fd(const Grid1D& g, const Eigen::VectorXd& u);

/// Checks the identity
///   <x . grad u, Au>_h = (2a-N)/2 <u, Au>_h
///                        - Gamma(1+a)^2/2 * sum_sides trace(u)^2 (x.nu)
/// on the interval (N = 1, (x.nu) = 1 at both ends of a symmetric domain).
/// Au must be the operator applied to u.  For a <= 1/2 the check still runs
/// but flags the exponent in the report's warning.
IdentityReport pohozaev_check(const FracOperator& op, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& Au,
                              const std::string& tag = {});

/// Same identity with x replaced by x - alpha, including the boundary weight
/// ((x - alpha) . nu).
IdentityReport pohozaev_alpha_check(const FracOperator& op,
                                    const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& Au, double alpha);

/// |<w2, A w1>_h - <w1, A w2>_h|; zero up to roundoff for the symmetric A.
IdentityReport ibp_symmetric_check(const FracOperator& op,
                                   const Eigen::VectorXd& w1,
                                   const Eigen::VectorXd& w2);

struct HopfReport {
  double min_abs_trace = 0.0;
  int violations = 0;
  std::vector<int> violating_modes;
};

/// Flags |trace(phi_n)| <= tol at either endpoint for n < n_max modes.
HopfReport hopf_check(const EigenBasis& basis, int n_max, double tol);

/// Runs `check` on each grid size, collecting residuals and the empirical
/// order.  check(nk) must return a single-grid IdentityReport.
IdentityReport refinement_study(
    const std::vector<int>& grid_sizes,
    const std::function<IdentityReport(int)>& check);

}  // namespace fracheat
