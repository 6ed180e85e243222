#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "fracheat/heat.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/rng.hpp"

using namespace fracheat;

namespace {

struct Setup {
  Grid1D g;
  FracOperator op;
  EigenBasis basis;
};

Setup setup(double a, int n) {
  Setup s;
  s.g = make_grid(-1.0, 1.0, n);
  s.op = assemble(a, s.g, PotentialSpec::zero(s.g));
  s.basis = eigendecompose(s.op);
  return s;
}

Eigen::VectorXd random_vec(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("solve_initial: semigroup identities") {
  const Setup s = setup(0.75, 64);
  const Eigen::VectorXd f = random_vec(64, 3);

  CHECK((solve_initial(s.basis, f, 0.0) - f).norm() <= 1e-10 * f.norm());

  const Eigen::VectorXd phi1 = s.basis.Phi.col(0);
  const Eigen::VectorXd u = solve_initial(s.basis, phi1, 0.4);
  CHECK((u - std::exp(-s.basis.lambdas[0] * 0.4) * phi1).norm() < 1e-12);

  const Eigen::VectorXd two_step =
      solve_initial(s.basis, solve_initial(s.basis, f, 0.3), 0.5);
  const Eigen::VectorXd one_step = solve_initial(s.basis, f, 0.8);
  CHECK((two_step - one_step).norm() <= 1e-10 * one_step.norm());

  // energy decay bound
  for (double t : {0.1, 0.5, 2.0}) {
    CHECK(norm_h(s.g, solve_initial(s.basis, f, t)) <=
          std::exp(-s.basis.lambdas[0] * t) * norm_h(s.g, f) * (1.0 + 1e-12));
  }
}

TEST_CASE("solve_adjoint: anchored at the terminal time") {
  const Setup s = setup(0.75, 64);
  const Eigen::VectorXd fs = random_vec(64, 11);
  const double T = 0.7;

  CHECK((solve_adjoint(s.basis, fs, T, T) - fs).norm() <= 1e-10 * fs.norm());
  CHECK((solve_adjoint(s.basis, fs, T, 0.2) -
         solve_initial(s.basis, fs, T - 0.2))
            .norm() == 0.0);
  CHECK_THROWS_AS(solve_adjoint(s.basis, fs, T, T + 0.1),
                  std::invalid_argument);

  // duality of the forward and adjoint flows
  const Eigen::VectorXd f = random_vec(64, 12);
  const double lhs = inner_h(s.g, solve_initial(s.basis, f, T), fs);
  const double rhs = inner_h(s.g, f, solve_adjoint(s.basis, fs, T, 0.0));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("heat kernel: symmetry, reconstruction, long-time asymptote") {
  const Setup s = setup(0.75, 64);
  const double t = 0.2;
  double tail = 0.0;
  CHECK(heat_kernel_eval(s.basis, t, 5, 20, 64) ==
        heat_kernel_eval(s.basis, t, 20, 5, 64));

  const Eigen::VectorXd f = random_vec(64, 5);
  const Eigen::VectorXd u = solve_initial(s.basis, f, t);
  for (int i : {0, 17, 40}) {
    double row = 0.0;
    for (int j = 0; j < 64; ++j)
      row += s.g.h * heat_kernel_eval(s.basis, t, i, j, 64) * f[j];
    CHECK(row == doctest::Approx(u[i]).epsilon(1e-10));
  }

  // truncation tail bound decreases with more terms
  heat_kernel_eval(s.basis, t, 5, 20, 8, &tail);
  double tail2 = 0.0;
  heat_kernel_eval(s.basis, t, 5, 20, 32, &tail2);
  CHECK(tail2 < tail);

  // spectral-gap dominance at large time
  const double tb = 3.0;
  const double gap = s.basis.lambdas[1] - s.basis.lambdas[0];
  const int c = 32;
  const double lead = std::exp(-s.basis.lambdas[0] * tb) *
                      s.basis.Phi(c, 0) * s.basis.Phi(c, 0);
  const double full = heat_kernel_eval(s.basis, tb, c, c, 64);
  CHECK(std::fabs(full / lead - 1.0) <= 64.0 * std::exp(-gap * tb));
}

TEST_CASE("heat kernel: positivity at benchmark parameters") {
  const Setup s = setup(0.75, 256);
  int violations = 0;
  for (double t : {0.1, 1.0}) {
    const Eigen::MatrixXd P =
        s.basis.Phi *
        (-t * s.basis.lambdas.array()).exp().matrix().asDiagonal() *
        s.basis.Phi.transpose();
    violations += static_cast<int>((P.array() <= 0.0).count());
  }
  CHECK(violations == 0);
}

TEST_CASE("boundary signal: validation and evaluation") {
  BoundarySignal F;
  F.times = {0.0, 0.5, 1.0};
  F.values = {{0.0, 0.0}, {1.0, -2.0}, {0.0, 0.0}};
  F.validate();
  CHECK(F.eval(0.25, 0) == doctest::Approx(0.5));
  CHECK(F.eval(0.75, 1) == doctest::Approx(-1.0));
  CHECK(F.eval(2.0, 0) == 0.0);  // zero extension

  BoundarySignal bad = F;
  bad.values[0] = {0.1, 0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  BoundarySignal bad2 = F;
  bad2.times[1] = 0.0;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("transposition solve: duality against adjoint modes") {
  const Setup s = setup(0.75, 96);
  const double T = 1.0;

  BoundarySignal F;
  const int m = 60;
  for (int k = 0; k <= m; ++k) {
    const double t = T * k / m;
    F.times.push_back(t);
    if (k == 0)
      F.values.push_back({0.0, 0.0});
    else
      F.values.push_back({std::sin(3.0 * t) * t, t * t});
  }

  const HeatCoeffState uF = solve_singular_boundary(s.basis, F, T);
  const double kap = kappa_pairing(0.75);
  for (int k = 0; k < 10; ++k) {
    // adjoint data phi_k: (u_g/d^a)(s, side) = e^{-lambda_k (T-s)} psi_k
    auto integrand = [&](double t) {
      const double d = std::exp(-s.basis.lambdas[k] * (T - t));
      return F.eval(t, 0) * d * s.basis.traces(k, 0) +
             F.eval(t, 1) * d * s.basis.traces(k, 1);
    };
    const double rhs = kap * gauss_composite(integrand, 0.0, T, 240, 8);
    const double lhs = uF.coeffs[k];
    CAPTURE(k);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("transposition solve: zero data, linearity, homogeneity") {
  const Setup s = setup(0.8, 64);
  const double T = 0.8;
  BoundarySignal zero;
  zero.times = {0.0, T};
  zero.values = {{0.0, 0.0}, {0.0, 0.0}};
  CHECK(solve_singular_boundary(s.basis, zero, T).coeffs.norm() == 0.0);

  BoundarySignal F1, F2;
  F1.times = F2.times = {0.0, 0.3, 0.6, T};
  F1.values = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}};
  F2.values = {{0, 0}, {0, 2}, {-1, 0}, {0.25, -0.5}};
  BoundarySignal sum = F1;
  for (std::size_t i = 0; i < sum.values.size(); ++i) {
    sum.values[i][0] += F2.values[i][0];
    sum.values[i][1] += F2.values[i][1];
  }
  const Eigen::VectorXd c1 = solve_singular_boundary(s.basis, F1, T).coeffs;
  const Eigen::VectorXd c2 = solve_singular_boundary(s.basis, F2, T).coeffs;
  const Eigen::VectorXd cs = solve_singular_boundary(s.basis, sum, T).coeffs;
  CHECK((cs - c1 - c2).norm() <= 1e-12 * (c1.norm() + c2.norm()));

  BoundarySignal scaled = F1;
  for (auto& v : scaled.values) {
    v[0] *= -3.0;
    v[1] *= -3.0;
  }
  const Eigen::VectorXd csc = solve_singular_boundary(s.basis, scaled, T).coeffs;
  CHECK((csc + 3.0 * c1).norm() <= 1e-12 * csc.norm());
}

TEST_CASE("transposition solve: semigroup consistency for early support") {
  const Setup s = setup(0.75, 96);
  const double T1 = 0.4, T = 1.0;
  BoundarySignal F;
  F.times = {0.0, 0.1, 0.25, T1};
  F.values = {{0, 0}, {0.7, -0.3}, {0.2, 0.9}, {0, 0}};

  const HeatCoeffState at_T1 = solve_singular_boundary(s.basis, F, T1);
  const Eigen::VectorXd evolved =
      solve_initial(s.basis, at_T1.nodal_at(T1), T - T1);
  const Eigen::VectorXd direct =
      solve_singular_boundary(s.basis, F, T).nodal_at(T);
  CHECK((evolved - direct).norm() <= 1e-8 * direct.norm());
}

TEST_CASE("transposition solve: exponent range enforced") {
  const Setup s = setup(0.4, 32);
  BoundarySignal F;
  F.times = {0.0, 1.0};
  F.values = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(solve_singular_boundary(s.basis, F, 1.0),
                  std::invalid_argument);
}
