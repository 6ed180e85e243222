#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "fracheat/operator.hpp"
#include "fracheat/spectral.hpp"
#include "fracheat/traces.hpp"

namespace fracheat {

/// Wave solution restricted to the first J Fourier modes of the operator.
/// Each modal amplitude solves p_j'' + lambda_j p_j = 0, so everything here
/// is exact in time.
struct WaveState {
  const FracOperator* op = nullptr;
  const EigenBasis* basis = nullptr;
  int J = 0;
  Eigen::VectorXd a_coeffs;  // p_j(0)
  Eigen::VectorXd b_coeffs;  // p_j'(0)
};

WaveState make_wave_state(const FracOperator& op, const EigenBasis& basis,
                          Eigen::VectorXd a_coeffs, Eigen::VectorXd b_coeffs);

/// Modal amplitudes and their velocities at time t.
void wave_modal(const WaveState& w, double t, Eigen::VectorXd& pj,
                Eigen::VectorXd& pj_t);

/// Nodal (p, p_t) at time t.
std::pair<Eigen::VectorXd, Eigen::VectorXd> wave_solve(const WaveState& w,
                                                       double t);

/// E(t) = 1/2 ||p_t||_h^2 + 1/2 <p, A0 p>_h + 1/2 <q p, p>_h with
/// A0 = A - diag(q); conserved exactly for the modal representation.
double wave_energy(const WaveState& w, double t);

/// Squared boundary traces sum_sides (x.nu) trace(p(t), side, a)^2.
double wave_boundary_power(const WaveState& w, double t);

/// Residual of the multiplier identity on [eps, T]:
///   Gamma(1+a)^2/2 Int boundary power dt
///     = a T E(eps) + [<p_t, x.grad p + (N-a)/2 p>_h]_eps^T
///       - Int <(q a/2 + x.grad q/2) p, p>_h dt - a T <q p(eps), p(eps)>_h.
/// Time integrals use composite Gauss-Legendre sized for the fastest mode.
IdentityReport multiplier_residual(const WaveState& w, double eps, double T);

/// Equipartition residual: -Int ||p_t||^2 + Int <p, A0 p> + [<p_t, p>]
/// + Int <q p, p> over [eps, T]; zero for the exact modal solution.
double equipartition_residual(const WaveState& w, double eps, double T);

struct WaveObsResult {
  double worst_ratio = 0.0;      // max over samples of 2a E / (Gamma^2 B(T))
  double min_T_minus_T0 = 0.0;   // 1 / worst_ratio
  double T0_est = 0.0;           // critical-time estimate from a T-sweep
  double C_est = 0.0;            // T0_est / lambda_J^(1-a)
  bool holds = false;            // observability at the given T, all samples
  bool theta_ok = true;          // smallness hypothesis on q satisfied
};

/// Empirical observability study over `samples` random mode mixtures.
WaveObsResult wave_obs_constant(const FracOperator& op, const EigenBasis& basis,
                                int J, double T, std::uint64_t seed,
                                int samples = 200);

struct T0Fit {
  std::vector<int> Js;
  std::vector<double> lambda_J;
  std::vector<double> T0_est;
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double C = 0.0;  // prefactor of the fitted power law
};

/// Fits log T0(J) against log lambda_J across the given mode counts.
T0Fit wave_t0_fit(const FracOperator& op, const EigenBasis& basis,
                  const std::vector<int>& Js, double T, std::uint64_t seed,
                  int samples = 200);

}  // namespace fracheat
