#include "fracheat/gammafn.hpp"

#include <cmath>
#include <stdexcept>

namespace fracheat {

namespace {

// Lanczos g = 7, n = 9 coefficient set (Godfrey / Numerical Recipes).
constexpr double kG = 7.0;
constexpr double kCoef[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double z) {
  return z <= 0.0 && z == std::floor(z);
}

// Valid for z >= 0.5.
double lanczos(double z) {
  const double zm1 = z - 1.0;
  double acc = kCoef[0];
  for (int i = 1; i < 9; ++i) acc += kCoef[i] / (zm1 + i);
  const double t = zm1 + kG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, zm1 + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double sin_pi(double z) {
  // reduce to |r| <= 1/2 so the pi*r product stays well conditioned
  const double r = z - std::round(z);
  const double s = std::sin(M_PI * r);
  // sin(pi z) = sin(pi r) * (-1)^round(z)
  const long long k = static_cast<long long>(std::llround(z - r));
  return (k % 2 == 0) ? s : -s;
}

double gamma_fn(double z) {
  if (is_nonpositive_integer(z))
    throw std::domain_error("gamma_fn: pole at non-positive integer z");
  if (z >= 0.5) return lanczos(z);
  // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
  return M_PI / (sin_pi(z) * lanczos(1.0 - z));
}

double log_abs_gamma(double z) {
  if (is_nonpositive_integer(z))
    throw std::domain_error("log_abs_gamma: pole at non-positive integer z");
  if (z >= 0.5) return std::log(lanczos(z));
  return std::log(M_PI) - std::log(std::fabs(sin_pi(z))) -
         std::log(lanczos(1.0 - z));
}

}  // namespace fracheat
