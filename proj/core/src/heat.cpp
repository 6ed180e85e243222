#include "fracheat/heat.hpp"

#include <cmath>
#include <stdexcept>

#include "fracheat/gammafn.hpp"
#include "fracheat/io.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

Eigen::VectorXd HeatCoeffState::coeffs_at(double t) const {
  const double dt = (direction == TimeDirection::forward) ? t - anchor_time
                                                          : anchor_time - t;
  if (dt < -1e-12)
    throw std::invalid_argument(
        "HeatCoeffState: evaluation time outside decay direction");
  return (coeffs.array() * (-basis->lambdas.array() * std::max(dt, 0.0)).exp())
      .matrix();
}

Eigen::VectorXd HeatCoeffState::nodal_at(double t) const {
  return basis->synthesize(coeffs_at(t));
}

void BoundarySignal::validate() const {
  if (times.size() != values.size() || times.empty())
    throw std::invalid_argument("BoundarySignal: times/values mismatch");
  if (times.front() != 0.0 || values.front()[0] != 0.0 ||
      values.front()[1] != 0.0)
    throw std::invalid_argument("BoundarySignal: requires F(0,.) = 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw std::invalid_argument("BoundarySignal: times must increase");
  for (const auto& v : values)
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
      throw std::invalid_argument("BoundarySignal: non-finite value");
}

double BoundarySignal::eval(double t, int side) const {
  if (t < times.front() || t > times.back()) return 0.0;
  std::size_t lo = 0, hi = times.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (times[mid] <= t ? lo : hi) = mid;
  }
  if (times.size() == 1) return values[0][side];
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * values[lo][side] + w * values[hi][side];
}

BoundarySignal BoundarySignal::from_csv(const std::filesystem::path& p) {
  const CsvTable t = read_csv(p);
  if (t.header.size() != 3 || t.header[0] != "t" || t.header[1] != "F_left" ||
      t.header[2] != "F_right")
    throw std::runtime_error("boundary signal CSV must have header `t,F_left,F_right`");
  BoundarySignal s;
  for (Eigen::Index i = 0; i < t.columns[0].size(); ++i) {
    s.times.push_back(t.columns[0][i]);
    s.values.push_back({t.columns[1][i], t.columns[2][i]});
  }
  s.validate();
  return s;
}

void BoundarySignal::to_csv(const std::filesystem::path& p) const {
  const Eigen::Index m = static_cast<Eigen::Index>(times.size());
  Eigen::VectorXd tt(m), fl(m), fr(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    tt[i] = times[i];
    fl[i] = values[i][0];
    fr[i] = values[i][1];
  }
  write_csv(p, {"t", "F_left", "F_right"}, {tt, fl, fr});
}

Eigen::VectorXd solve_initial(const EigenBasis& basis, const Eigen::VectorXd& f,
                              double t) {
  if (t < 0.0) throw std::invalid_argument("solve_initial: t >= 0");
  Eigen::VectorXd c = basis.project(f);
  c.array() *= (-basis.lambdas.array() * t).exp();
  return basis.synthesize(c);
}

Eigen::VectorXd solve_adjoint(const EigenBasis& basis,
                              const Eigen::VectorXd& f_star, double T,
                              double t) {
  if (t < 0.0 || t > T)
    throw std::invalid_argument("solve_adjoint: t must lie in [0, T]");
  return solve_initial(basis, f_star, T - t);
}

double heat_kernel_eval(const EigenBasis& basis, double t, int i, int j,
                        int n_terms, double* tail_bound) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_eval: t > 0");
  const int n = basis.n();
  n_terms = std::min(n_terms, n);
  double acc = 0.0;
  double mass_i = 0.0, mass_j = 0.0;
  for (int k = 0; k < n_terms; ++k) {
    const double pi_k = basis.Phi(i, k), pj_k = basis.Phi(j, k);
    // product formed first so the value is exactly symmetric in (i, j)
    acc += std::exp(-basis.lambdas[k] * t) * (pi_k * pj_k);
    mass_i += pi_k * pi_k;
    mass_j += pj_k * pj_k;
  }
  if (tail_bound) {
    if (n_terms >= n) {
      *tail_bound = 0.0;
    } else {
      // completeness: sum_k phi_k(i)^2 = 1/h
      const double rem_i = std::max(0.0, 1.0 / basis.grid.h - mass_i);
      const double rem_j = std::max(0.0, 1.0 / basis.grid.h - mass_j);
      *tail_bound =
          std::exp(-basis.lambdas[n_terms] * t) * std::sqrt(rem_i * rem_j);
    }
  }
  return acc;
}

double kappa_pairing(double a) { return gamma_fn(a) * gamma_fn(a + 1.0); }

HeatCoeffState solve_singular_boundary(const EigenBasis& basis,
                                       const BoundarySignal& F, double T) {
  if (!(basis.a > 0.5 && basis.a < 1.0))
    throw std::invalid_argument(
        "solve_singular_boundary: requires a in (1/2, 1)");
  F.validate();
  if (!(T > 0.0) || F.times.back() > T * (1.0 + 1e-12))
    throw std::invalid_argument(
        "solve_singular_boundary: signal must live within [0, T]");

  const int n = basis.n();
  const double kap = kappa_pairing(basis.a);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);

  // closed form per linear segment: with tau = s1 - s and beta = T - s1,
  // Int F(s) e^{-lam (T-s)} ds = e^{-lam beta} [F1 E0 + (F0-F1)/D E1]
  for (std::size_t seg = 0; seg + 1 < F.times.size(); ++seg) {
    const double s0 = F.times[seg], s1 = F.times[seg + 1];
    const double D = s1 - s0;
    const double beta = T - s1;
    for (int side = 0; side < 2; ++side) {
      const double f0 = F.values[seg][side], f1 = F.values[seg + 1][side];
      if (f0 == 0.0 && f1 == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        const double lam = basis.lambdas[k];
        const double damp = std::exp(-lam * beta);
        if (damp == 0.0) continue;
        const double integral =
            damp * (f1 * exp_moment0(lam, D) + (f0 - f1) / D * exp_moment1(lam, D));
        c[k] += kap * integral * basis.traces(k, side);
      }
    }
  }

  HeatCoeffState st;
  st.basis = &basis;
  st.coeffs = std::move(c);
  st.anchor_time = T;
  st.direction = TimeDirection::forward;
  return st;
}

}  // namespace fracheat
