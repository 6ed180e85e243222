#include "fracheat/control.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "fracheat/parallel.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

void ControlConfig::validate() const {
  if (!(T > 0.0)) throw std::invalid_argument("ControlConfig: T > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("ControlConfig: epsilon > 0");
  if (!(t1 > 0.0 && t1 < T))
    throw std::invalid_argument("ControlConfig: need 0 < t1 < T");
  if (!(mu_bisect_tol > 0.0) || max_iters < 1)
    throw std::invalid_argument("ControlConfig: bad tolerance settings");
}

double eta_ramp(double t, double t1) {
  if (t1 <= 0.0) return 1.0;
  if (t <= 0.5 * t1) return 0.0;
  if (t >= t1) return 1.0;
  const double u = (t - 0.5 * t1) / (0.5 * t1);
  return u * u * (3.0 - 2.0 * u);
}

namespace {

double shrink_norm(const Eigen::VectorXd& sigma, const Eigen::VectorXd& ht,
                   double mu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double r = mu / (sigma[i] + mu);
    s += ht[i] * r * ht[i] * r;
  }
  return std::sqrt(s);
}

struct MuSolution {
  double mu = 0.0;
  int iterations = 0;
};

// Solves mu * ||c(mu)|| = eps for the radial-shrinkage multiplier, where
// c_i = ht_i / (sigma_i + mu).  mu |c| is strictly increasing with limit
// ||ht||, so geometric bisection brackets the root.
MuSolution solve_mu(const Eigen::VectorXd& sigma, const Eigen::VectorXd& ht,
                    double eps, double tol, int max_iters) {
  double lo = 1e-300, hi = 1.0;
  while (shrink_norm(sigma, ht, hi) < eps && hi < 1e300) hi *= 10.0;
  if (shrink_norm(sigma, ht, hi) < eps)
    throw std::runtime_error("control: epsilon exceeds the reachable range");
  if (shrink_norm(sigma, ht, lo) > eps)
    throw std::runtime_error(
        "control: bisection floor above epsilon; target has high-mode content "
        "that the decay factors cannot resolve at this horizon");
  MuSolution out;
  double g = 0.0;
  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    out.mu = std::sqrt(lo * hi);
    g = shrink_norm(sigma, ht, out.mu);
    if (std::fabs(g - eps) <= tol * eps) return out;
    (g < eps ? lo : hi) = out.mu;
  }
  if (std::fabs(g - eps) > 1e3 * tol * eps)
    throw std::runtime_error("control: mu bisection failed to converge");
  return out;
}

}  // namespace

ControlResult control_initial(const EigenBasis& basis, const Eigen::VectorXd& h,
                              const ControlConfig& cfg) {
  cfg.validate();
  if (!(basis.a > 0.5 && basis.a < 1.0))
    throw std::invalid_argument("control_initial: requires a in (1/2, 1)");
  if (h.size() != basis.grid.n)
    throw std::invalid_argument("control_initial: target size != grid size");

  const Eigen::VectorXd hn = basis.project(h);
  ControlResult res;
  res.target_norm = hn.norm();
  if (res.target_norm <= cfg.epsilon) {
    res.control_coeffs = Eigen::VectorXd::Zero(basis.n());
    res.achieved_error = res.target_norm;
    return res;
  }

  const Eigen::VectorXd decay =
      (-2.0 * cfg.T * basis.lambdas.array()).exp().matrix();
  const MuSolution mu =
      solve_mu(decay, hn, cfg.epsilon, cfg.mu_bisect_tol, cfg.max_iters);
  const Eigen::VectorXd c =
      (hn.array() / (decay.array() + mu.mu)).matrix();

  res.mu = mu.mu;
  res.iterations = mu.iterations;
  // control f = u_{c}(0): one decay factor from the anchor at T
  res.control_coeffs =
      (c.array() * (-cfg.T * basis.lambdas.array()).exp()).matrix();
  // model prediction of the final state is decay .* c
  res.achieved_error = ((decay.array() * c.array()).matrix() - hn).norm();
  return res;
}

Eigen::MatrixXd boundary_gram(const EigenBasis& basis, int J, double T,
                              double t1) {
  const int n = basis.n();
  if (J < 1 || J > n) throw std::invalid_argument("boundary_gram: bad J");
  Eigen::MatrixXd G(J, J);
  const auto& lam = basis.lambdas;
  const auto& psi = basis.traces;
  parallel_for(J, [&](int k) {
    for (int m = 0; m <= k; ++m) {
      const double L = lam[k] + lam[m];
      // plateau [max(t1,0), T] in closed form
      double tint = exp_moment0(L, T - std::max(t1, 0.0));
      if (t1 > 0.0) {
        // ramp piece [t1/2, t1]; eta == 0 below it
        auto f = [&](double t) {
          const double e = eta_ramp(t, t1);
          return e * e * std::exp(-L * (T - t));
        };
        tint += gauss_panel(f, 0.5 * t1, t1, 32);
      }
      const double v =
          (psi(k, 0) * psi(m, 0) + psi(k, 1) * psi(m, 1)) * tint;
      G(k, m) = v;
      G(m, k) = v;
    }
  });
  return G;
}

ControlResult control_boundary(const EigenBasis& basis, const PotentialSpec& q,
                               const Eigen::VectorXd& h,
                               const ControlConfig& cfg, bool enforce_theta) {
  cfg.validate();
  if (!(basis.a > 0.5 && basis.a < 1.0))
    throw std::invalid_argument("control_boundary: requires a in (1/2, 1)");
  if (h.size() != basis.grid.n)
    throw std::invalid_argument("control_boundary: target size != grid size");
  if (!basis.traces.allFinite())
    throw std::runtime_error("control_boundary: non-finite boundary traces");

  if (enforce_theta) {
    const double chs = poincare_constant(basis.a, basis.grid);
    const ThetaBound tb = theta_bound(chs, 1, basis.grid.radius());
    const double theta_q = std::max(q.sup_q, q.sup_grad_q);
    if (!tb.accepts(q, theta_q))
      throw std::invalid_argument(
          "control_boundary: potential fails the smallness condition "
          "(needs q >= 0 and sup|q|, sup|q'| < theta_max)");
  }

  const int n = basis.n();
  const int J = (cfg.modes > 0) ? std::min(cfg.modes, n) : n;
  const Eigen::VectorXd hn = basis.project(h);

  ControlResult res;
  res.target_norm = hn.norm();
  if (res.target_norm <= cfg.epsilon) {
    res.control_coeffs = Eigen::VectorXd::Zero(J);
    res.achieved_error = res.target_norm;
    return res;
  }

  const double tail2 = hn.tail(n - J).squaredNorm();
  const double eps2 = cfg.epsilon * cfg.epsilon - tail2;
  if (eps2 <= 0.0)
    throw std::runtime_error(
        "control_boundary: target content beyond the retained modes already "
        "exceeds epsilon; raise the mode count");
  const double eps_eff = std::sqrt(eps2);

  const double kap = kappa_pairing(basis.a);
  const Eigen::MatrixXd M =
      kap * kap * boundary_gram(basis, J, cfg.T, cfg.t1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("control_boundary: Gram eigensolver failed");
  const Eigen::VectorXd sigma = es.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& V = es.eigenvectors();

  const Eigen::VectorXd hJ = hn.head(J);
  const Eigen::VectorXd ht = V.transpose() * hJ;
  const MuSolution mu =
      solve_mu(sigma, ht, eps_eff, cfg.mu_bisect_tol, cfg.max_iters);
  const Eigen::VectorXd c =
      V * (ht.array() / (sigma.array() + mu.mu)).matrix();

  res.mu = mu.mu;
  res.iterations = mu.iterations;
  res.control_coeffs = c;
  res.achieved_error =
      std::sqrt((M * c - hJ).squaredNorm() + tail2);

  // emitted signal F = kappa eta^2(t) sum_k c_k exp(-lambda_k (T-t)) psi_k,
  // on knots graded logarithmically toward t = T where the fast modes live
  BoundarySignal F;
  std::vector<double> taus;  // tau = T - t, descending in t
  const double tau_max = cfg.T - cfg.t1;
  const double tau_floor =
      std::min(tau_max * 1e-3, 1e-3 / std::max(basis.lambdas[J - 1], 1.0));
  const int ramp_knots = 49;
  const int decay_knots = std::max(64, cfg.signal_samples - ramp_knots - 3);
  const double ratio =
      std::log(tau_max / tau_floor) / static_cast<double>(decay_knots - 1);
  F.times.push_back(0.0);
  F.values.push_back({0.0, 0.0});
  for (int i = 0; i <= ramp_knots; ++i) {
    const double t = 0.5 * cfg.t1 + 0.5 * cfg.t1 * i / ramp_knots;
    if (t > F.times.back()) {
      F.times.push_back(t);
      F.values.push_back({0.0, 0.0});
    }
  }
  for (int i = 1; i < decay_knots; ++i)
    taus.push_back(tau_max * std::exp(-ratio * i));
  taus.push_back(0.0);
  for (double tau : taus) {
    F.times.push_back(cfg.T - tau);
    F.values.push_back({0.0, 0.0});
  }
  for (std::size_t idx = 0; idx < F.times.size(); ++idx) {
    const double t = F.times[idx];
    const double e = eta_ramp(t, cfg.t1);
    if (e == 0.0) continue;
    double fl = 0.0, fr = 0.0;
    for (int k = 0; k < J; ++k) {
      const double d = std::exp(-basis.lambdas[k] * (cfg.T - t));
      fl += c[k] * d * basis.traces(k, 0);
      fr += c[k] * d * basis.traces(k, 1);
    }
    F.values[idx] = {kap * e * e * fl, kap * e * e * fr};
  }
  F.validate();
  res.boundary_signal = std::move(F);
  return res;
}

ObsConstant observability_constant(const EigenBasis& basis, double T, int J) {
  if (!(T > 0.0)) throw std::invalid_argument("observability_constant: T > 0");
  if (J < 1 || J > basis.n() / 4)
    throw std::invalid_argument(
        "observability_constant: J limited to n/4 resolved modes");

  // eta == 1 Gram, weighted by (x . nu) at each endpoint
  const int n = J;
  Eigen::MatrixXd G0(n, n);
  const double w_left = -basis.grid.x_left;
  const double w_right = basis.grid.x_right;
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m <= k; ++m) {
      const double L = basis.lambdas[k] + basis.lambdas[m];
      const double tint = exp_moment0(L, T);
      const double v = (w_left * basis.traces(k, 0) * basis.traces(m, 0) +
                        w_right * basis.traces(k, 1) * basis.traces(m, 1)) *
                       tint;
      G0(k, m) = v;
      G0(m, k) = v;
    }
  }

  ObsConstant out;
  Eigen::LLT<Eigen::MatrixXd> llt(G0);
  if (llt.info() != Eigen::Success) {
    G0.diagonal().array() += 1e-14 * G0.trace();
    out.regularized = true;
  }

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    D(k, k) = std::exp(-2.0 * basis.lambdas[k] * T);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(D, G0);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("observability_constant: eigensolver failed");
  out.value = ges.eigenvalues().maxCoeff();
  return out;
}

}  // namespace fracheat
