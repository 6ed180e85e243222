#include "fracheat/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracheat {

namespace {

GaussRule build_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-angle initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre P_n(x) and derivative via the three-term recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double lo,
                   double hi, int n) {
  const GaussRule& r = gauss_legendre(n);
  const double c = 0.5 * (lo + hi), s = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += r.weights[i] * f(c + s * r.nodes[i]);
  return s * acc;
}

double gauss_composite(const std::function<double(double)>& f, double lo,
                       double hi, int panels, int n) {
  double acc = 0.0;
  const double w = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p)
    acc += gauss_panel(f, lo + p * w, lo + (p + 1) * w, n);
  return acc;
}

double exp_moment0(double lam, double D) {
  const double x = lam * D;
  if (std::fabs(x) < 1e-8) return D * (1.0 - 0.5 * x + x * x / 6.0);
  return -std::expm1(-x) / lam;
}

double exp_moment1(double lam, double D) {
  const double x = lam * D;
  if (std::fabs(x) < 1e-3) {
    return D * D *
           (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0 +
            x * x * x * x / 144.0);
  }
  return (1.0 - (1.0 + x) * std::exp(-x)) / (lam * lam);
}

}  // namespace fracheat
