#include "fracheat/operator.hpp"

#include <cmath>
#include <stdexcept>

#include "fracheat/gammafn.hpp"
#include "fracheat/io.hpp"
#include "fracheat/parallel.hpp"

namespace fracheat {

namespace {

void check_exponent(double a) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("fractional exponent a must lie in (0,1)");
}

// C(a) = 4^a Gamma(1/2+a) / (sqrt(pi) |Gamma(-a)|).  The normalization is
// taken positive so the assembled operator is positive definite.
double kernel_constant(double a) {
  return std::pow(4.0, a) * gamma_fn(0.5 + a) /
         (std::sqrt(M_PI) * std::fabs(gamma_fn(-a)));
}

}  // namespace

PotentialSpec PotentialSpec::zero(const Grid1D& g) {
  return from_values(g, Eigen::VectorXd::Zero(g.n));
}

PotentialSpec PotentialSpec::from_values(const Grid1D& g, Eigen::VectorXd q) {
  if (q.size() != g.n)
    throw std::invalid_argument("PotentialSpec: value count != grid size");
  PotentialSpec p;
  p.values = std::move(q);
  p.grad_values.resize(g.n);
  const int n = g.n;
  if (n >= 2) {
    p.grad_values[0] = (p.values[1] - p.values[0]) / g.h;
    p.grad_values[n - 1] = (p.values[n - 1] - p.values[n - 2]) / g.h;
    for (int i = 1; i < n - 1; ++i)
      p.grad_values[i] = (p.values[i + 1] - p.values[i - 1]) / (2.0 * g.h);
  } else {
    p.grad_values.setZero();
  }
  p.sup_q = p.values.cwiseAbs().maxCoeff();
  p.sup_grad_q = p.grad_values.cwiseAbs().maxCoeff();
  p.nonneg = p.values.minCoeff() >= 0.0;
  return p;
}

PotentialSpec PotentialSpec::from_csv(const Grid1D& g,
                                      const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != 2 || t.header[0] != "x" || t.header[1] != "q")
    throw std::runtime_error("potential CSV must have header `x,q`");
  return from_values(g, interp_linear_zero(t.columns[0], t.columns[1], g.nodes));
}

double kernel_weight(double a, long m) {
  check_exponent(a);
  if (m < 1) throw std::invalid_argument("kernel_weight: m >= 1");
  double k = kernel_constant(a) * gamma_fn(1.0 - a) / gamma_fn(2.0 + a);
  for (long j = 1; j < m; ++j) k *= (j - a) / (j + 1.0 + a);
  return k;
}

Eigen::VectorXd kernel_weights(double a, int count) {
  check_exponent(a);
  Eigen::VectorXd k(count);
  if (count == 0) return k;
  k[0] = kernel_constant(a) * gamma_fn(1.0 - a) / gamma_fn(2.0 + a);
  for (int m = 1; m < count; ++m) k[m] = k[m - 1] * (m - a) / (m + 1.0 + a);
  return k;
}

double diagonal_sum(double a) {
  check_exponent(a);
  return kernel_constant(a) * gamma_fn(1.0 - a) / (a * gamma_fn(1.0 + a));
}

FracOperator assemble(double a, const Grid1D& g, const PotentialSpec& q) {
  check_exponent(a);
  if (q.values.size() != g.n)
    throw std::invalid_argument("assemble: potential size != grid size");

  FracOperator op;
  op.a = a;
  op.grid = g;
  op.q = q.values;
  op.kernel_weights = kernel_weights(a, g.n);
  op.diag_sum = diagonal_sum(a);

  const double scale = std::pow(g.h, -2.0 * a);
  op.A.resize(g.n, g.n);
  Eigen::MatrixXd& A = op.A;
  const Eigen::VectorXd& K = op.kernel_weights;
  parallel_for(g.n, [&](int i) {
    A(i, i) = scale * op.diag_sum + op.q[i];
    for (int j = 0; j < i; ++j) {
      const double v = -scale * K[i - j - 1];
      A(i, j) = v;
      A(j, i) = v;
    }
  });
  return op;
}

}  // namespace fracheat
