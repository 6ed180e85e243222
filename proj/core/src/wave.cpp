#include "fracheat/wave.hpp"

#include <cmath>
#include <stdexcept>

#include "fracheat/gammafn.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/rng.hpp"

namespace fracheat {

namespace {

int panels_for(const WaveState& w, double span) {
  // keep >= 8 Gauss points per period of the fastest quadratic component
  const double omega = std::sqrt(w.basis->lambdas[w.J - 1]);
  return std::max(64, static_cast<int>(std::ceil(span * omega / M_PI)));
}

}  // namespace

WaveState make_wave_state(const FracOperator& op, const EigenBasis& basis,
                          Eigen::VectorXd a_coeffs, Eigen::VectorXd b_coeffs) {
  WaveState w;
  w.op = &op;
  w.basis = &basis;
  w.J = static_cast<int>(a_coeffs.size());
  if (b_coeffs.size() != w.J)
    throw std::invalid_argument("make_wave_state: coefficient size mismatch");
  if (w.J < 1 || w.J > basis.n() / 4)
    throw std::invalid_argument("make_wave_state: J limited to n/4");
  if (!(basis.lambdas[w.J - 1] > 0.0) || !(basis.lambdas[0] > 0.0))
    throw std::invalid_argument("make_wave_state: needs positive eigenvalues");
  w.a_coeffs = std::move(a_coeffs);
  w.b_coeffs = std::move(b_coeffs);
  return w;
}

void wave_modal(const WaveState& w, double t, Eigen::VectorXd& pj,
                Eigen::VectorXd& pj_t) {
  pj.resize(w.J);
  pj_t.resize(w.J);
  for (int j = 0; j < w.J; ++j) {
    const double omega = std::sqrt(w.basis->lambdas[j]);
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    pj[j] = w.a_coeffs[j] * c + w.b_coeffs[j] * s / omega;
    pj_t[j] = -w.a_coeffs[j] * omega * s + w.b_coeffs[j] * c;
  }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> wave_solve(const WaveState& w,
                                                       double t) {
  Eigen::VectorXd pj, pj_t;
  wave_modal(w, t, pj, pj_t);
  const auto block = w.basis->Phi.leftCols(w.J);
  return {block * pj, block * pj_t};
}

double wave_energy(const WaveState& w, double t) {
  const auto [p, pt] = wave_solve(w, t);
  const Grid1D& g = w.basis->grid;
  const Eigen::VectorXd Ap = w.op->A * p;
  const Eigen::VectorXd qp = w.op->q.cwiseProduct(p);
  const Eigen::VectorXd A0p = Ap - qp;
  return 0.5 * inner_h(g, pt, pt) + 0.5 * inner_h(g, p, A0p) +
         0.5 * inner_h(g, qp, p);
}

double wave_boundary_power(const WaveState& w, double t) {
  Eigen::VectorXd pj, pj_t;
  wave_modal(w, t, pj, pj_t);
  double tl = 0.0, tr = 0.0;
  for (int j = 0; j < w.J; ++j) {
    tl += pj[j] * w.basis->traces(j, 0);
    tr += pj[j] * w.basis->traces(j, 1);
  }
  const Grid1D& g = w.basis->grid;
  return (-g.x_left) * tl * tl + g.x_right * tr * tr;
}

IdentityReport multiplier_residual(const WaveState& w, double eps, double T) {
  if (!(eps >= 0.0 && eps < T))
    throw std::invalid_argument("multiplier_residual: need 0 <= eps < T");
  const Grid1D& g = w.basis->grid;
  const double a = w.op->a;
  const double ga = gamma_fn(1.0 + a);
  const int panels = panels_for(w, T - eps);

  IdentityReport rep;
  rep.lhs = 0.5 * ga * ga *
            gauss_composite([&](double t) { return wave_boundary_power(w, t); },
                            eps, T, panels, 8);

  auto bracket = [&](double t) {
    const auto [p, pt] = wave_solve(w, t);
    const Eigen::VectorXd xgrad =
        g.nodes.cwiseProduct(gradient_fd(g, p));
    return inner_h(g, pt, xgrad) + 0.5 * (1.0 - a) * inner_h(g, pt, p);
  };

  const Eigen::VectorXd dq = gradient_fd(g, w.op->q);
  auto qterm = [&](double t) {
    const auto [p, pt] = wave_solve(w, t);
    const Eigen::VectorXd weight =
        0.5 * a * w.op->q + 0.5 * g.nodes.cwiseProduct(dq);
    return inner_h(g, weight.cwiseProduct(p), p);
  };

  const auto [p_eps, pt_eps] = wave_solve(w, eps);
  const double q_eps =
      inner_h(g, w.op->q.cwiseProduct(p_eps), p_eps);

  rep.rhs = a * T * wave_energy(w, eps) + bracket(T) - bracket(eps) -
            gauss_composite(qterm, eps, T, panels, 8) - a * T * q_eps;
  rep.residual = relative_residual(rep.lhs, rep.rhs);
  return rep;
}

double equipartition_residual(const WaveState& w, double eps, double T) {
  const Grid1D& g = w.basis->grid;
  const int panels = panels_for(w, T - eps);
  auto kinetic = [&](double t) {
    const auto [p, pt] = wave_solve(w, t);
    return inner_h(g, pt, pt);
  };
  auto potential = [&](double t) {
    const auto [p, pt] = wave_solve(w, t);
    const Eigen::VectorXd A0p = w.op->A * p - w.op->q.cwiseProduct(p);
    return inner_h(g, p, A0p);
  };
  auto qquad = [&](double t) {
    const auto [p, pt] = wave_solve(w, t);
    return inner_h(g, w.op->q.cwiseProduct(p), p);
  };
  auto cross = [&](double t) {
    const auto [p, pt] = wave_solve(w, t);
    return inner_h(g, pt, p);
  };
  const double ik = gauss_composite(kinetic, eps, T, panels, 8);
  const double ip = gauss_composite(potential, eps, T, panels, 8);
  const double iq = gauss_composite(qquad, eps, T, panels, 8);
  const double sum = -ik + ip + (cross(T) - cross(eps)) + iq;
  const double scale = std::max({std::fabs(ik), std::fabs(ip), 1e-14});
  return std::fabs(sum) / scale;
}

namespace {

struct SampleSet {
  std::vector<Eigen::VectorXd> as, bs;
};

SampleSet draw_samples(int J, int samples, std::uint64_t seed) {
  Rng rng(seed);
  SampleSet s;
  s.as.reserve(samples);
  s.bs.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd a(J), b(J);
    for (int j = 0; j < J; ++j) a[j] = rng.normal();
    for (int j = 0; j < J; ++j) b[j] = rng.normal();
    s.as.push_back(std::move(a));
    s.bs.push_back(std::move(b));
  }
  return s;
}

// worst ratio 2a E / (Gamma(1+a)^2 B(T')) over the samples, for each prefix
// time; prefix boundaries at T * i / steps.
std::vector<double> worst_ratios_prefix(const FracOperator& op,
                                        const EigenBasis& basis, int J,
                                        double T, int steps,
                                        const SampleSet& set) {
  const double a = op.a;
  const double ga = gamma_fn(1.0 + a);
  std::vector<double> worst(steps, 0.0);
  for (std::size_t s = 0; s < set.as.size(); ++s) {
    const WaveState w = make_wave_state(op, basis, set.as[s], set.bs[s]);
    // energy is conserved; sample three slice times and take the max
    const double E = std::max(
        {wave_energy(w, 0.0), wave_energy(w, 0.5 * T), wave_energy(w, T)});
    double B = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double lo = T * i / steps, hi = T * (i + 1) / steps;
      const int panels = std::max(
          8, static_cast<int>(std::ceil((hi - lo) *
                                        std::sqrt(basis.lambdas[J - 1]) /
                                        M_PI)));
      B += gauss_composite(
          [&](double t) { return wave_boundary_power(w, t); }, lo, hi, panels,
          8);
      const double ratio = 2.0 * a * E / (ga * ga * std::max(B, 1e-300));
      worst[i] = std::max(worst[i], ratio);
    }
  }
  return worst;
}

double critical_time_estimate(const FracOperator& op, const EigenBasis& basis,
                              int J, double T, const SampleSet& set) {
  const int steps = 16;
  const std::vector<double> worst =
      worst_ratios_prefix(op, basis, J, T, steps, set);
  double t0 = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double Ti = T * (i + 1) / steps;
    t0 = std::max(t0, Ti - 1.0 / worst[i]);
  }
  return t0;
}

}  // namespace

WaveObsResult wave_obs_constant(const FracOperator& op, const EigenBasis& basis,
                                int J, double T, std::uint64_t seed,
                                int samples) {
  if (J < 1 || J > basis.n() / 4)
    throw std::invalid_argument("wave_obs_constant: J limited to n/4");
  const SampleSet set = draw_samples(J, samples, seed);
  const std::vector<double> worst =
      worst_ratios_prefix(op, basis, J, T, 16, set);

  WaveObsResult out;
  out.worst_ratio = worst.back();
  out.min_T_minus_T0 = 1.0 / out.worst_ratio;
  out.T0_est = critical_time_estimate(op, basis, J, T, set);
  out.C_est = out.T0_est / std::pow(basis.lambdas[J - 1], 1.0 - op.a);
  out.holds = T > out.T0_est;
  {
    // hypothesis check is reported, never enforced
    const PotentialSpec qs = PotentialSpec::from_values(basis.grid, op.q);
    const ThetaBound tb = theta_bound(poincare_constant(op.a, basis.grid), 1,
                                      basis.grid.radius());
    out.theta_ok = tb.accepts(qs, std::max(qs.sup_q, qs.sup_grad_q));
  }
  return out;
}

T0Fit wave_t0_fit(const FracOperator& op, const EigenBasis& basis,
                  const std::vector<int>& Js, double T, std::uint64_t seed,
                  int samples) {
  T0Fit fit;
  for (int J : Js) {
    const SampleSet set =
        draw_samples(J, samples, seed ^ static_cast<std::uint64_t>(J));
    fit.Js.push_back(J);
    fit.lambda_J.push_back(basis.lambdas[J - 1]);
    fit.T0_est.push_back(
        std::max(critical_time_estimate(op, basis, J, T, set), 1e-12));
  }
  // least squares on log T0 = log C + e log lambda_J
  const int m = static_cast<int>(fit.Js.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(fit.lambda_J[i]);
    const double y = std::log(fit.T0_est[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  fit.exponent = (m * sxy - sx * sy) / denom;
  const double icept = (sy - fit.exponent * sx) / m;
  fit.C = std::exp(icept);
  double ssr = 0.0, sxc = 0.0;
  const double xbar = sx / m;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(fit.lambda_J[i]);
    const double y = std::log(fit.T0_est[i]);
    const double r = y - (icept + fit.exponent * x);
    ssr += r * r;
    sxc += (x - xbar) * (x - xbar);
  }
  fit.stderr_exponent = (m > 2) ? std::sqrt(ssr / (m - 2) / sxc) : 0.0;
  return fit;
}

}  // namespace fracheat
