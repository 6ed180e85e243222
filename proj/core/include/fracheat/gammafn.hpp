#pragma once

namespace fracheat {

/// Gamma function on the real line, excluding the poles at 0, -1, -2, ...
///
/// Lanczos approximation (g = 7, 9 coefficients) for z >= 1/2, reflection
/// formula below.  Relative accuracy better than 1e-13 away from the poles.
/// Throws std::domain_error at a pole.
double gamma_fn(double z);

/// log|Gamma(z)|, same domain restrictions as gamma_fn.
double log_abs_gamma(double z);

/// sin(pi*z) with argument reduction so accuracy is preserved near integers.
double sin_pi(double z);

/// Stateless evaluator wrapper; handy where an object is expected.
struct GammaTable {
  double operator()(double z) const { return gamma_fn(z); }
};

}  // namespace fracheat
