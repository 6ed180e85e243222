#include "fracheat/inverse.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fracheat/io.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/rng.hpp"

namespace fracheat {

Eigen::MatrixXd forward_trace_map(double a, const Grid1D& g,
                                  const PotentialSpec& q,
                                  const Eigen::VectorXd& f,
                                  const std::vector<double>& times) {
  const FracOperator op = assemble(a, g, q);
  const EigenBasis basis = eigendecompose(op);
  const Eigen::VectorXd c = basis.project(f);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(times.size()), 2);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0))
      throw std::invalid_argument("forward_trace_map: times must be > 0");
    // trace is linear, so sum mode traces against decayed coefficients
    double tl = 0.0, tr = 0.0;
    for (int j = 0; j < basis.n(); ++j) {
      const double d = std::exp(-basis.lambdas[j] * times[k]) * c[j];
      tl += d * basis.traces(j, 0);
      tr += d * basis.traces(j, 1);
    }
    out(static_cast<Eigen::Index>(k), 0) = tl;
    out(static_cast<Eigen::Index>(k), 1) = tr;
  }
  return out;
}

Eigen::VectorXd forward_final_map(double a, const Grid1D& g,
                                  const PotentialSpec& q,
                                  const BoundarySignal& F, double T) {
  const FracOperator op = assemble(a, g, q);
  const EigenBasis basis = eigendecompose(op);
  return solve_singular_boundary(basis, F, T).nodal_at(T);
}

namespace {

BoundarySignal time_reversed(const BoundarySignal& F, double T) {
  if (std::fabs(F.eval(T, 0)) > 0.0 || std::fabs(F.eval(T, 1)) > 0.0)
    throw std::invalid_argument(
        "duality check: boundary data must vanish at the terminal time");
  BoundarySignal rev;
  rev.times.push_back(0.0);
  rev.values.push_back({0.0, 0.0});
  for (auto it = F.times.rbegin(); it != F.times.rend(); ++it) {
    const double t = T - *it;
    if (t <= rev.times.back()) continue;
    const std::size_t idx = F.times.rend() - it - 1;
    rev.times.push_back(t);
    rev.values.push_back(F.values[idx]);
  }
  // zero extension of F below t=0 maps to the tail above T - F.times.back()
  if (rev.times.back() < T) {
    rev.times.push_back(T);
    rev.values.push_back({0.0, 0.0});
  }
  rev.validate();
  return rev;
}

}  // namespace

IdentityReport duality_pairing_check(double a, const Grid1D& g,
                                     const PotentialSpec& q,
                                     const Eigen::VectorXd& f,
                                     const BoundarySignal& F, double T) {
  const FracOperator op = assemble(a, g, q);
  const EigenBasis basis = eigendecompose(op);
  const double kap = kappa_pairing(a);

  // left side: the backward singular-boundary solution at t = 0
  const HeatCoeffState w = solve_singular_boundary(basis, time_reversed(F, T), T);
  IdentityReport rep;
  rep.lhs = inner_h(g, w.nodal_at(T), f);

  // right side: closed-form segment integrals of F(s) e^{-lambda s}
  const Eigen::VectorXd c = basis.project(f);
  double rhs = 0.0;
  for (int j = 0; j < basis.n(); ++j) {
    const double lam = basis.lambdas[j];
    for (int side = 0; side < 2; ++side) {
      double integral = 0.0;
      for (std::size_t seg = 0; seg + 1 < F.times.size(); ++seg) {
        const double s0 = F.times[seg], D = F.times[seg + 1] - s0;
        const double f0 = F.values[seg][side], f1 = F.values[seg + 1][side];
        if (f0 == 0.0 && f1 == 0.0) continue;
        integral += std::exp(-lam * s0) *
                    (f0 * exp_moment0(lam, D) +
                     (f1 - f0) / D * exp_moment1(lam, D));
      }
      rhs += kap * c[j] * basis.traces(j, side) * integral;
    }
  }
  rep.rhs = rhs;
  rep.residual = relative_residual(rep.lhs, rep.rhs);
  return rep;
}

std::pair<IdentityReport, IdentityReport> duality_equivalence_check(
    double a, const Grid1D& g, const PotentialSpec& q1,
    const PotentialSpec& q2, const Eigen::VectorXd& f, const BoundarySignal& F,
    double T) {
  return {duality_pairing_check(a, g, q1, f, F, T),
          duality_pairing_check(a, g, q2, f, F, T)};
}

double distinguishability(double a, const Grid1D& g, const PotentialSpec& q1,
                          const PotentialSpec& q2, int probe_count,
                          std::uint64_t seed) {
  Rng rng(seed);
  const FracOperator op0 = assemble(a, g, PotentialSpec::zero(g));
  const EigenBasis basis0 = eigendecompose(op0);
  const int span = std::min(8, basis0.n());
  const double T = 1.0;
  std::vector<double> times;
  for (int k = 1; k <= 8; ++k) times.push_back(T * k / 8.0);

  double margin = 0.0;
  for (int p = 0; p < probe_count; ++p) {
    // initial-data probe: random mixture of low modes of the q=0 operator
    Eigen::VectorXd mix = Eigen::VectorXd::Zero(basis0.n());
    for (int k = 0; k < span; ++k) mix[k] = rng.normal();
    const Eigen::VectorXd f = basis0.synthesize(mix);
    const Eigen::MatrixXd d1 = forward_trace_map(a, g, q1, f, times);
    const Eigen::MatrixXd d2 = forward_trace_map(a, g, q2, f, times);
    const double n1 = d1.norm();
    if (n1 > 0.0) margin = std::max(margin, (d1 - d2).norm() / n1);

    // boundary probe: random piecewise-linear signal vanishing at both ends
    BoundarySignal F;
    const int knots = 9;
    for (int k = 0; k <= knots; ++k) {
      F.times.push_back(T * k / knots);
      if (k == 0 || k == knots)
        F.values.push_back({0.0, 0.0});
      else
        F.values.push_back({rng.normal(), rng.normal()});
    }
    const Eigen::VectorXd u1 = forward_final_map(a, g, q1, F, T);
    const Eigen::VectorXd u2 = forward_final_map(a, g, q2, F, T);
    const double m1 = norm_h(g, u1);
    if (m1 > 0.0) margin = std::max(margin, norm_h(g, u1 - u2) / m1);
  }
  return margin;
}

Eigen::MatrixXd probe_basis(double a, const Grid1D& g, const PotentialSpec& q0,
                            int count) {
  if (count < 1 || count > g.n)
    throw std::invalid_argument("probe_basis: bad probe count");
  const EigenBasis basis = eigendecompose(assemble(a, g, q0));
  Eigen::MatrixXd probes = basis.Phi.leftCols(count);
  for (int k = 0; k < count; ++k)
    if (probes(0, k) < 0.0) probes.col(k) = -probes.col(k);
  return probes;
}

int MeasurementSet::probe_count() const {
  return kind == MeasurementKind::initial_to_boundary
             ? static_cast<int>(probes.cols())
             : static_cast<int>(signals.size());
}

void MeasurementSet::validate(const Grid1D& g) const {
  if (kind == MeasurementKind::initial_to_boundary) {
    if (probes.rows() != g.n)
      throw std::invalid_argument("MeasurementSet: probe rows != grid size");
    if (times.empty())
      throw std::invalid_argument("MeasurementSet: no sample times");
    for (double t : times)
      if (!(t > 0.0 && t <= T))
        throw std::invalid_argument("MeasurementSet: times within (0, T]");
    if (data.rows() != probes.cols() ||
        data.cols() != static_cast<Eigen::Index>(2 * times.size()))
      throw std::invalid_argument("MeasurementSet: data shape mismatch");
  } else {
    if (signals.empty())
      throw std::invalid_argument("MeasurementSet: no boundary probes");
    if (data.rows() != static_cast<Eigen::Index>(signals.size()) ||
        data.cols() != g.n)
      throw std::invalid_argument("MeasurementSet: data shape mismatch");
  }
}

Eigen::MatrixXd predict_measurements(double a, const Grid1D& g,
                                     const PotentialSpec& q,
                                     const MeasurementSet& ms) {
  const Eigen::Index cols =
      ms.kind == MeasurementKind::initial_to_boundary
          ? static_cast<Eigen::Index>(2 * ms.times.size())
          : static_cast<Eigen::Index>(g.n);
  Eigen::MatrixXd pred(ms.probe_count(), cols);
  if (ms.kind == MeasurementKind::initial_to_boundary) {
    const FracOperator op = assemble(a, g, q);
    const EigenBasis basis = eigendecompose(op);
    for (int p = 0; p < ms.probe_count(); ++p) {
      const Eigen::VectorXd c = basis.project(ms.probes.col(p));
      for (std::size_t k = 0; k < ms.times.size(); ++k) {
        double tl = 0.0, tr = 0.0;
        for (int j = 0; j < basis.n(); ++j) {
          const double d = std::exp(-basis.lambdas[j] * ms.times[k]) * c[j];
          tl += d * basis.traces(j, 0);
          tr += d * basis.traces(j, 1);
        }
        pred(p, static_cast<Eigen::Index>(2 * k)) = tl;
        pred(p, static_cast<Eigen::Index>(2 * k + 1)) = tr;
      }
    }
  } else {
    const FracOperator op = assemble(a, g, q);
    const EigenBasis basis = eigendecompose(op);
    for (int p = 0; p < ms.probe_count(); ++p)
      pred.row(p) =
          solve_singular_boundary(basis, ms.signals[p], ms.T).nodal_at(ms.T);
  }
  return pred;
}

MeasurementSet synthesize_measurements(
    double a, const Grid1D& model_grid, const Grid1D& synth_grid,
    const std::function<double(double)>& q_true,
    const std::function<double(double)>& q0_fn, MeasurementKind kind,
    int probe_count, const std::vector<double>& times,
    const std::vector<BoundarySignal>& signals, double T, double noise_level,
    std::uint64_t seed) {
  auto sample = [](const Grid1D& g, const std::function<double(double)>& f) {
    Eigen::VectorXd v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = f(g.nodes[i]);
    return v;
  };
  const PotentialSpec qt_fine =
      PotentialSpec::from_values(synth_grid, sample(synth_grid, q_true));
  const PotentialSpec q0_fine =
      PotentialSpec::from_values(synth_grid, sample(synth_grid, q0_fn));
  const PotentialSpec q0_coarse =
      PotentialSpec::from_values(model_grid, sample(model_grid, q0_fn));

  MeasurementSet fine;
  fine.kind = kind;
  fine.T = T;
  fine.times = times;
  fine.signals = signals;
  fine.noise_level = noise_level;
  if (kind == MeasurementKind::initial_to_boundary)
    fine.probes = probe_basis(a, synth_grid, q0_fine, probe_count);

  MeasurementSet out = fine;
  if (kind == MeasurementKind::initial_to_boundary)
    out.probes = probe_basis(a, model_grid, q0_coarse, probe_count);

  Eigen::MatrixXd truth = predict_measurements(a, synth_grid, qt_fine, fine);
  Eigen::MatrixXd base_f = predict_measurements(a, synth_grid, q0_fine, fine);
  Eigen::MatrixXd base_c = predict_measurements(a, model_grid, q0_coarse, out);
  if (kind == MeasurementKind::boundary_to_final) {
    // final slices live on the synthesis grid; carry them over by resampling
    Eigen::MatrixXd truth_c(truth.rows(), model_grid.n);
    Eigen::MatrixXd basef_c(truth.rows(), model_grid.n);
    for (Eigen::Index p = 0; p < truth.rows(); ++p) {
      truth_c.row(p) = interp_linear_zero(synth_grid.nodes,
                                          truth.row(p).transpose(),
                                          model_grid.nodes);
      basef_c.row(p) = interp_linear_zero(synth_grid.nodes,
                                          base_f.row(p).transpose(),
                                          model_grid.nodes);
    }
    truth = truth_c;
    base_f = basef_c;
  }
  out.data = truth - base_f + base_c;
  if (noise_level > 0.0) {
    Rng rng(seed);
    for (Eigen::Index i = 0; i < out.data.rows(); ++i)
      for (Eigen::Index j = 0; j < out.data.cols(); ++j)
        out.data(i, j) *= 1.0 + noise_level * rng.normal();
  }
  return out;
}

InverseResult reconstruct_potential(double a, const Grid1D& g,
                                    const MeasurementSet& ms, double reg,
                                    const Eigen::VectorXd& q0, int max_iters,
                                    const Eigen::VectorXd* q_true) {
  if (g.n > 64)
    throw std::invalid_argument(
        "reconstruct_potential: n <= 64 enforced for inverse runs");
  ms.validate(g);
  if (q0.size() != g.n)
    throw std::invalid_argument("reconstruct_potential: q0 size != grid size");
  if (reg < 0.0) throw std::invalid_argument("reconstruct_potential: reg >= 0");

  const int n = g.n;
  const Eigen::Index mdim = ms.data.size();

  auto residual = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd {
    const Eigen::MatrixXd pred =
        predict_measurements(a, g, PotentialSpec::from_values(g, q), ms);
    Eigen::MatrixXd diff = pred - ms.data;
    return Eigen::Map<Eigen::VectorXd>(diff.data(), mdim);
  };
  auto objective = [&](const Eigen::VectorXd& q,
                       const Eigen::VectorXd& r) -> double {
    return 0.5 * r.squaredNorm() +
           0.5 * reg * g.h * (q - q0).squaredNorm();
  };

  InverseResult out;
  out.regularization = reg;
  Eigen::VectorXd q = q0;
  Eigen::VectorXd r = residual(q);
  double phi = objective(q, r);
  out.misfit_history.push_back(phi);

  const double fd_step = 1e-6;
  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    // forward-difference Jacobian, one column per potential node
    Eigen::MatrixXd Jac(mdim, n);
    parallel_for(n, [&](int j) {
      Eigen::VectorXd qj = q;
      qj[j] += fd_step;
      Jac.col(j) = (residual(qj) - r) / fd_step;
    });

    const Eigen::VectorXd grad = Jac.transpose() * r + reg * g.h * (q - q0);
    out.grad_norm = grad.norm();
    if (out.grad_norm <= 1e-8) break;

    Eigen::MatrixXd H = Jac.transpose() * Jac;
    H.diagonal().array() += reg * g.h + 1e-12 * H.trace() / n;
    const Eigen::VectorXd step = H.ldlt().solve(-grad);

    // Armijo backtracking
    const double slope = grad.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Eigen::VectorXd qn = q + t * step;
      const Eigen::VectorXd rn = residual(qn);
      const double phin = objective(qn, rn);
      if (phin <= phi + 1e-4 * t * slope) {
        q = qn;
        r = rn;
        phi = phin;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      out.line_search_failed = true;
      break;
    }
    out.misfit_history.push_back(phi);
  }

  out.q_rec = q;
  if (q_true) {
    const double denom = norm_h(g, *q_true);
    out.rel_error = denom > 0.0 ? norm_h(g, q - *q_true) / denom : -1.0;
  }
  return out;
}

}  // namespace fracheat
