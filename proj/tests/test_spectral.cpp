#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "fracheat/spectral.hpp"

using namespace fracheat;

namespace {

EigenBasis basis_for(double a, int n, double qconst = 0.0) {
  const Grid1D g = make_grid(-1.0, 1.0, n);
  const PotentialSpec q = PotentialSpec::from_values(
      g, Eigen::VectorXd::Constant(n, qconst));
  return eigendecompose(assemble(a, g, q));
}

}  // namespace

TEST_CASE("eigendecompose: 2x2 closed form") {
  const double a = 0.75;
  Grid1D g;
  g.x_left = -1.0;
  g.x_right = 1.0;
  g.n = 2;
  g.h = 2.0 / 3.0;
  g.nodes.resize(2);
  g.nodes << -1.0 / 3.0, 1.0 / 3.0;

  const double scale = std::pow(g.h, -2.0 * a);
  FracOperator op;
  op.a = a;
  op.grid = g;
  op.q = Eigen::VectorXd::Zero(2);
  op.A.resize(2, 2);
  op.A << 2.0 * scale, -scale, -scale, 2.0 * scale;

  const EigenBasis basis = eigendecompose(op);
  CHECK(basis.lambdas[0] == doctest::Approx(scale).epsilon(1e-12));
  CHECK(basis.lambdas[1] == doctest::Approx(3.0 * scale).epsilon(1e-12));
  // columns orthonormal under the h-inner product
  CHECK(inner_h(g, basis.Phi.col(0), basis.Phi.col(0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inner_h(g, basis.Phi.col(0), basis.Phi.col(1)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eigendecompose: orthonormality and residuals") {
  const EigenBasis basis = basis_for(0.75, 128);
  const Grid1D& g = basis.grid;
  const FracOperator op = assemble(0.75, g, PotentialSpec::zero(g));

  Eigen::MatrixXd gram =
      g.h * basis.Phi.transpose() * basis.Phi -
      Eigen::MatrixXd::Identity(g.n, g.n);
  CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);

  CHECK(basis.lambdas[0] > 0.0);
  for (int k : {0, 5, 63, 127}) {
    const Eigen::VectorXd r =
        op.A * basis.Phi.col(k) - basis.lambdas[k] * basis.Phi.col(k);
    CHECK(norm_h(g, r) <= 1e-8 * basis.lambdas[k]);
  }
}

TEST_CASE("eigendecompose: parity on a symmetric interval") {
  const EigenBasis basis = basis_for(0.75, 128);
  const int n = basis.n();
  for (int i = 0; i < n; ++i) {
    CHECK(basis.Phi(i, 0) ==
          doctest::Approx(basis.Phi(n - 1 - i, 0)).epsilon(1e-8));
    CHECK(basis.Phi(i, 1) ==
          doctest::Approx(-basis.Phi(n - 1 - i, 1)).epsilon(1e-8));
  }
}

TEST_CASE("eigendecompose: constant potential shift") {
  const double c = 0.37;
  const EigenBasis b0 = basis_for(0.6, 64);
  const EigenBasis bc = basis_for(0.6, 64, c);
  for (int k = 0; k < 64; ++k) {
    CHECK(bc.lambdas[k] ==
          doctest::Approx(b0.lambdas[k] + c).epsilon(1e-10));
  }
  CHECK((bc.Phi - b0.Phi).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("eigendecompose: completeness and spectral mapping") {
  const EigenBasis basis = basis_for(0.8, 64);
  const Grid1D& g = basis.grid;
  // resolution of identity: h Phi Phi^T = I
  Eigen::MatrixXd res = g.h * basis.Phi * basis.Phi.transpose() -
                        Eigen::MatrixXd::Identity(g.n, g.n);
  CHECK(res.cwiseAbs().maxCoeff() < 1e-8);

  // p(A) v via direct products vs the spectral route
  const FracOperator op = assemble(0.8, g, PotentialSpec::zero(g));
  Eigen::VectorXd v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = std::sin(2.0 * g.nodes[i]);
  const Eigen::VectorXd direct =
      op.A * (op.A * v) + 2.0 * (op.A * v) + 3.0 * v;
  const Eigen::VectorXd plam =
      (basis.lambdas.array().square() + 2.0 * basis.lambdas.array() + 3.0)
          .matrix();
  const Eigen::VectorXd spectral =
      basis.Phi * plam.cwiseProduct(basis.project(v));
  CHECK((direct - spectral).norm() / direct.norm() < 1e-8);
}

TEST_CASE("weyl slope: growth exponent near 2a") {
  const EigenBasis basis = basis_for(0.75, 512);
  const double slope = weyl_slope(basis, 4, 64);
  CHECK(slope > 1.35);
  CHECK(slope < 1.65);
  CHECK_THROWS_AS(weyl_slope(basis, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(weyl_slope(basis, 0, 64), std::invalid_argument);

  // a constant shift barely moves the estimate at higher k
  const EigenBasis shifted = basis_for(0.75, 512, 0.5);
  CHECK(std::fabs(weyl_slope(shifted, 16, 64) - weyl_slope(basis, 16, 64)) <
        0.05);
}

TEST_CASE("poincare constant: positivity and monotonicity in a") {
  const Grid1D g = make_grid(-1.0, 1.0, 256);
  const double c55 = poincare_constant(0.55, g);
  const double c75 = poincare_constant(0.75, g);
  const double c95 = poincare_constant(0.95, g);
  CHECK(c55 > 0.0);
  CHECK(c75 < c55);
  CHECK(c95 < c75);
}

TEST_CASE("poincare constant: refinement stability") {
  const double c512 = poincare_constant(0.75, make_grid(-1.0, 1.0, 512));
  const double c1024 = poincare_constant(0.75, make_grid(-1.0, 1.0, 1024));
  CHECK(std::fabs(c1024 - c512) <= 0.02 * c512);
}

TEST_CASE("theta bound: arithmetic and the acceptance predicate") {
  const ThetaBound tb = theta_bound(1.0, 1, 1.0);
  CHECK(tb.theta_max == doctest::Approx(0.2).epsilon(1e-15));

  const Grid1D g = make_grid(-1.0, 1.0, 32);
  CHECK(tb.accepts(PotentialSpec::zero(g), 0.1));
  // sup exactly at the threshold fails the strict inequality on theta
  const PotentialSpec q = PotentialSpec::from_values(
      g, Eigen::VectorXd::Constant(g.n, tb.theta_max));
  CHECK_FALSE(tb.accepts(q, tb.theta_max));
  Eigen::VectorXd neg = Eigen::VectorXd::Constant(g.n, -0.01);
  CHECK_FALSE(tb.accepts(PotentialSpec::from_values(g, neg), 0.1));
}
