#pragma once

#include <Eigen/Core>
#include <optional>

#include "fracheat/heat.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

/// Parameters shared by both variational controllers.
struct ControlConfig {
  double T = 1.0;        // horizon
  double epsilon = 0.01;
  double t1 = 0.25;      // cutoff eta: 0 on [0,t1/2], cubic ramp, 1 on [t1,T]
  double mu_bisect_tol = 1e-10;  // relative tolerance on mu*||c|| = epsilon
  int max_iters = 400;
  int modes = 0;            // boundary Gram truncation; 0 keeps all modes
  int signal_samples = 4096;  // knots of the emitted boundary signal

  void validate() const;
};

/// Cutoff eta(t): 0 below t1/2, cubic smoothstep up to t1, 1 afterwards.
double eta_ramp(double t, double t1);

struct ControlResult {
  Eigen::VectorXd control_coeffs;  // f for initial control; adjoint seed for boundary
  std::optional<BoundarySignal> boundary_signal;
  double mu = 0.0;
  double achieved_error = 0.0;
  double target_norm = 0.0;
  int iterations = 0;
};

/// Initial-data control: minimizes
///   (1/2) sum_k exp(-2 lambda_k T) c_k^2 + eps ||c|| - <h, c>
/// over adjoint seeds c; the radial shrinkage reduces optimality to the
/// scalar equation mu ||c(mu)|| = eps with c_k = h_k / (exp(-2 lambda_k T) +
/// mu), solved by bisection.  The returned control f has coefficients
/// exp(-lambda_k T) c_k and drives the forward solution to exactly
/// ||u_f(T) - h||_h = eps (up to the bisection tolerance).  Returns the zero
/// control when ||h||_h <= eps.
ControlResult control_initial(const EigenBasis& basis, const Eigen::VectorXd& h,
                              const ControlConfig& cfg);

/// Boundary-trace Gram matrix over the first J modes:
///   G_km = sum_sides psi_k psi_m Int_0^T eta^2(t) exp(-(l_k+l_m)(T-t)) dt,
/// with eta == 1 when t1 <= 0.  Gauss-Legendre on the ramp piece, closed form
/// on [t1, T].
Eigen::MatrixXd boundary_gram(const EigenBasis& basis, int J, double T,
                              double t1);

/// Singular-boundary control: minimizes (1/2) c^T (kappa^2 G) c + eps||c|| -
/// <h, c> and emits the signal F(t,side) = kappa eta^2(t) sum_k c_k
/// exp(-lambda_k (T-t)) psi_k(side), sampled on a grid graded toward t = T.
/// The transposition solver applied to the emitted signal reproduces the
/// model state kappa^2 G c up to sampling error.  When enforce_theta is set,
/// rejects potentials failing the smallness condition.
ControlResult control_boundary(const EigenBasis& basis, const PotentialSpec& q,
                               const Eigen::VectorXd& h,
                               const ControlConfig& cfg,
                               bool enforce_theta = true);

struct ObsConstant {
  double value = 0.0;
  bool regularized = false;
};

/// Best constant A(J) with A(J) * Q_boundary(c) >= ||u(0)||_h^2 on
/// span{phi_1..phi_J}: the largest generalized eigenvalue of
/// (diag(exp(-2 lambda_k T)), G0) where G0 is the eta == 1 boundary Gram with
/// weight (x . nu) at each endpoint.
ObsConstant observability_constant(const EigenBasis& basis, double T, int J);

}  // namespace fracheat
