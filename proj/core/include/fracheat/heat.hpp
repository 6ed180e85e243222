#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <vector>

#include "fracheat/spectral.hpp"

namespace fracheat {

enum class TimeDirection { forward, backward };

/// A heat solution stored as eigen-coefficients at an anchor time.
///
/// forward states decay for t >= anchor_time; backward states are adjoint
/// solutions anchored at a terminal time and decay toward t = 0.
struct HeatCoeffState {
  const EigenBasis* basis = nullptr;
  Eigen::VectorXd coeffs;
  double anchor_time = 0.0;
  TimeDirection direction = TimeDirection::forward;

  Eigen::VectorXd coeffs_at(double t) const;
  Eigen::VectorXd nodal_at(double t) const;
  double norm_h_at(double t) const { return coeffs_at(t).norm(); }
};

/// Boundary data F(t, side) on the two endpoints, piecewise linear in t.
/// times must start at 0 with F(0,.) = 0; F is extended by zero after the
/// last knot.
struct BoundarySignal {
  std::vector<double> times;
  std::vector<std::array<double, 2>> values;  // {left, right}

  void validate() const;
  double eval(double t, int side) const;

  static BoundarySignal from_csv(const std::filesystem::path& p);
  void to_csv(const std::filesystem::path& p) const;
};

/// Semigroup solution of the homogeneous-boundary problem with initial
/// data f: u(t) = sum_k exp(-lambda_k t) <phi_k, f>_h phi_k.
Eigen::VectorXd solve_initial(const EigenBasis& basis, const Eigen::VectorXd& f,
                              double t);

/// Adjoint solution anchored at terminal time T: value at 0 <= t <= T.
Eigen::VectorXd solve_adjoint(const EigenBasis& basis,
                              const Eigen::VectorXd& f_star, double T,
                              double t);

/// Truncated heat kernel P(t, x_i, x_j) = sum_k exp(-lambda_k t) phi_k(i)
/// phi_k(j) over the first n_terms modes.  If tail_bound is non-null it
/// receives exp(-lambda_{n_terms+1} t) times a Cauchy-Schwarz estimate of the
/// remaining mass.
double heat_kernel_eval(const EigenBasis& basis, double t, int i, int j,
                        int n_terms, double* tail_bound = nullptr);

/// Pairing constant Gamma(a) Gamma(a+1) of the boundary duality.
double kappa_pairing(double a);

/// Transposition solution of the singular-boundary-data problem: the state at
/// time T whose coefficients are
///   c_k = kappa(a) Int_0^T exp(-lambda_k (T-s)) sum_sides F(s, side)
///         trace_k(side) ds,
/// the unique state satisfying <u_F(T), g>_h = kappa(a) Int_0^T sum_sides
/// F(s,side) (u_g/d^a)(s,side) ds against every adjoint solution u_g.  The
/// time integral is evaluated in closed form on each linear segment of F.
/// Requires a in (1/2, 1) and F defined within [0, T].
HeatCoeffState solve_singular_boundary(const EigenBasis& basis,
                                       const BoundarySignal& F, double T);

}  // namespace fracheat
