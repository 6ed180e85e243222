#include "fracheat/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "fracheat/traces.hpp"

namespace fracheat {

EigenBasis eigendecompose(const FracOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: iteration failed to converge");

  EigenBasis basis;
  basis.a = op.a;
  basis.grid = op.grid;
  basis.lambdas = es.eigenvalues();
  basis.Phi = es.eigenvectors();

  const int n = op.grid.n;
  // renormalize to the h-inner product and fix signs
  const double s = 1.0 / std::sqrt(op.grid.h);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd col = basis.Phi.col(k) * s;
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col[imax] < 0.0) col = -col;
    basis.Phi.col(k) = col;
  }

  basis.traces.setZero(n, 2);
  if (n >= 8) {
    for (int k = 0; k < n; ++k) {
      basis.traces(k, 0) =
          boundary_trace(op.grid, basis.Phi.col(k), Side::left, op.a);
      basis.traces(k, 1) =
          boundary_trace(op.grid, basis.Phi.col(k), Side::right, op.a);
    }
  }
  return basis;
}

double weyl_slope(const EigenBasis& basis, int k_min, int k_max) {
  if (!(k_min >= 1 && k_min < k_max && k_max <= basis.n() / 2))
    throw std::invalid_argument("weyl_slope: need 1 <= k_min < k_max <= n/2");
  if (k_max - k_min + 1 < 8)
    throw std::invalid_argument("weyl_slope: range too small (< 8 points)");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const double lk = basis.lambdas[k - 1];
    if (!(lk > 0.0))
      throw std::runtime_error("weyl_slope: nonpositive eigenvalue in range");
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(lk);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double poincare_constant(double a, const Grid1D& g) {
  const FracOperator op = assemble(a, g, PotentialSpec::zero(g));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("poincare_constant: eigensolver failed");
  return 1.0 / es.eigenvalues()[0];
}

bool ThetaBound::accepts(const PotentialSpec& q, double theta) const {
  if (!(theta < theta_max)) return false;
  return q.nonneg && q.sup_q <= theta && q.sup_grad_q <= theta;
}

ThetaBound theta_bound(double C_HS, int N, double R) {
  if (!(C_HS > 0.0) || !(R > 0.0) || N < 1)
    throw std::invalid_argument("theta_bound: inputs must be positive");
  ThetaBound t;
  t.C_HS = C_HS;
  t.N = N;
  t.R = R;
  t.theta_max = 0.5 / (1.0 + C_HS * (0.5 * N + R));
  return t;
}

}  // namespace fracheat
