#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fracheat/heat.hpp"
#include "fracheat/traces.hpp"

namespace fracheat {

/// Boundary traces (u_f/d^a)(t_k, side) of the initial-data solution under
/// potential q, one row per requested time, columns (left, right).
Eigen::MatrixXd forward_trace_map(double a, const Grid1D& g,
                                  const PotentialSpec& q,
                                  const Eigen::VectorXd& f,
                                  const std::vector<double>& times);

/// Final slice u_F(T, .) of the singular-boundary solution under q.
Eigen::VectorXd forward_final_map(double a, const Grid1D& g,
                                  const PotentialSpec& q,
                                  const BoundarySignal& F, double T);

/// Checks the pairing between the backward singular-boundary solution w
/// (data F, terminal condition 0) and the initial-data solution u_f under the
/// same potential:
///   <w(0), f>_h = kappa(a) Int_0^T sum_sides F(s,side) trace(u_f(s), side) ds.
/// The right side is evaluated in closed form per linear segment of F.
/// Requires F to vanish at t = 0 and t = T.
IdentityReport duality_pairing_check(double a, const Grid1D& g,
                                     const PotentialSpec& q,
                                     const Eigen::VectorXd& f,
                                     const BoundarySignal& F, double T);

/// Runs the pairing check under both potentials; first = q1, second = q2.
std::pair<IdentityReport, IdentityReport> duality_equivalence_check(
    double a, const Grid1D& g, const PotentialSpec& q1,
    const PotentialSpec& q2, const Eigen::VectorXd& f, const BoundarySignal& F,
    double T);

/// Max over seeded probes (both measurement kinds) of the normalized data
/// difference between the two potentials.
double distinguishability(double a, const Grid1D& g, const PotentialSpec& q1,
                          const PotentialSpec& q2, int probe_count,
                          std::uint64_t seed);

enum class MeasurementKind { initial_to_boundary, boundary_to_final };

/// First `count` eigenfunctions of the operator with potential q0, one probe
/// per column, each re-signed to be positive at the leftmost node so the same
/// continuum probe comes out consistently on different grids.
Eigen::MatrixXd probe_basis(double a, const Grid1D& g, const PotentialSpec& q0,
                            int count);

/// Synthetic or measured data for the reconstruction solver.  For the trace
/// kind, `probes` holds nodal initial data (one column each) and each data
/// row stacks the traces (time-major, left then right).  For the final kind,
/// `signals` holds the boundary probes and each data row is the final slice
/// on the reconstruction grid.
struct MeasurementSet {
  MeasurementKind kind = MeasurementKind::initial_to_boundary;
  Eigen::MatrixXd probes;
  std::vector<BoundarySignal> signals;
  std::vector<double> times;
  double T = 1.0;
  double noise_level = 0.0;
  Eigen::MatrixXd data;

  int probe_count() const;
  void validate(const Grid1D& g) const;
};

/// Stacked model prediction matching ms.data row-for-row.
Eigen::MatrixXd predict_measurements(double a, const Grid1D& g,
                                     const PotentialSpec& q,
                                     const MeasurementSet& ms);

/// Synthetic data for a ground-truth potential q_true (given as a function of
/// x), generated on the finer synth_grid and calibrated against the q0
/// baseline of the model grid:  data = fine(q_true) - fine(q0) + coarse(q0).
/// The calibration cancels the grid systematic at first order, as a measured
/// baseline would in an experiment.  Gaussian noise is applied per component
/// at the given relative level (seeded).  Trace-kind probes are the
/// probe_basis of q0 on each grid; final-kind rows are interpolated onto the
/// model grid.
MeasurementSet synthesize_measurements(
    double a, const Grid1D& model_grid, const Grid1D& synth_grid,
    const std::function<double(double)>& q_true,
    const std::function<double(double)>& q0_fn, MeasurementKind kind,
    int probe_count, const std::vector<double>& times,
    const std::vector<BoundarySignal>& signals, double T, double noise_level,
    std::uint64_t seed);

struct InverseResult {
  Eigen::VectorXd q_rec;
  std::vector<double> misfit_history;
  double rel_error = -1.0;  // negative when no ground truth was supplied
  double regularization = 0.0;
  int iterations = 0;
  bool line_search_failed = false;
  double grad_norm = 0.0;
};

/// Damped Gauss-Newton with Tikhonov term (reg/2)||q - q0||_h^2, Jacobian by
/// forward differences over the potential nodes (n <= 64 enforced), Armijo
/// line search, stop on gradient norm <= 1e-8 or max_iters.  q_true, when
/// given, is only used to fill rel_error.
InverseResult reconstruct_potential(double a, const Grid1D& g,
                                    const MeasurementSet& ms, double reg,
                                    const Eigen::VectorXd& q0, int max_iters,
                                    const Eigen::VectorXd* q_true = nullptr);

}  // namespace fracheat
