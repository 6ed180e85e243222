#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace fracheat {

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence; accurate to machine precision.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

/// Int_lo^hi f, single Gauss panel of order n.
double gauss_panel(const std::function<double(double)>& f, double lo,
                   double hi, int n);

/// Composite rule: `panels` equal panels of order n each.
double gauss_composite(const std::function<double(double)>& f, double lo,
                       double hi, int panels, int n);

/// Int_0^D exp(-lam tau) dtau, stable for small |lam * D|.
double exp_moment0(double lam, double D);

/// Int_0^D tau exp(-lam tau) dtau.
double exp_moment1(double lam, double D);

}  // namespace fracheat
