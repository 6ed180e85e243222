#pragma once

#include <functional>
#include <stdexcept>

namespace fracheat {

/// Raised when adaptive refinement cannot reach the requested tolerance
/// within its evaluation budget.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reference evaluation of (-Delta)^a u at an interior point x by the
/// principal-value integral
///
///   C(a) p.v. Int (u(x) - u(y)) / |x-y|^(1+2a) dy,
///   C(a) = 4^a Gamma(1/2+a) / (sqrt(pi) |Gamma(-a)|),
///
/// for u extended by zero outside (x_left, x_right).  Symmetric pairing
/// y = x +- r removes the singularity; the remaining endpoint weakness is
/// regularized by a graded substitution and integrated adaptively to the
/// absolute tolerance tol.  Slow; intended as a test oracle only.
double pv_reference_apply(const std::function<double(double)>& u,
                          double x_left, double x_right, double x, double a,
                          double tol);

}  // namespace fracheat
