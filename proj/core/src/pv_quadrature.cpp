#include "fracheat/pv_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracheat/gammafn.hpp"

namespace fracheat {

namespace {

struct Budget {
  long evals = 0;
  long max_evals = 4'000'000;
  bool depth_exhausted = false;
  void charge(long k) {
    evals += k;
    if (evals > max_evals)
      throw QuadratureError(
          "pv_reference_apply: tolerance unreachable within budget");
  }
};

double simpson(double lo, double hi, double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adapt(const std::function<double(double)>& f, double lo, double hi,
             double flo, double fmid, double fhi, double whole, double tol,
             int depth, Budget& b) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
  b.charge(2);
  const double flmid = f(lmid), frmid = f(rmid);
  const double lv = simpson(lo, mid, flo, flmid, fmid);
  const double rv = simpson(mid, hi, fmid, frmid, fhi);
  const double err = (lv + rv - whole) / 15.0;
  // roundoff floor: below this the estimate is noise, not signal
  const double floor = 8.0 * 1e-16 * (std::fabs(lv) + std::fabs(rv));
  if (std::fabs(err) <= std::max(tol, floor)) return lv + rv + err;
  if (depth <= 0) {
    b.depth_exhausted = true;
    return lv + rv + err;
  }
  return adapt(f, lo, mid, flo, flmid, fmid, lv, 0.5 * tol, depth - 1, b) +
         adapt(f, mid, hi, fmid, frmid, fhi, rv, 0.5 * tol, depth - 1, b);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol, Budget& b) {
  if (!(hi > lo)) return 0.0;
  b.charge(3);
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo), fmid = f(mid), fhi = f(hi);
  const double whole = simpson(lo, hi, flo, fmid, fhi);
  return adapt(f, lo, hi, flo, fmid, fhi, whole, tol, 44, b);
}

}  // namespace

double pv_reference_apply(const std::function<double(double)>& u,
                          double x_left, double x_right, double x, double a,
                          double tol) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("pv_reference_apply: a in (0,1)");
  if (!(x > x_left && x < x_right))
    throw std::invalid_argument("pv_reference_apply: x must be interior");
  if (!(tol > 0.0)) throw std::invalid_argument("pv_reference_apply: tol > 0");

  auto uz = [&](double y) {
    return (y > x_left && y < x_right) ? u(y) : 0.0;
  };
  const double ux = uz(x);
  const double dist = std::min(x - x_left, x_right - x);
  const double r_far = std::max(x - x_left, x_right - x);

  // symmetric-pair integrand; integrable ~ r^(1-2a) at the origin
  auto f = [&](double r) {
    return (2.0 * ux - uz(x + r) - uz(x - r)) / std::pow(r, 1.0 + 2.0 * a);
  };

  // Innermost piece by a fourth-order Taylor model: near r = 0 the symmetric
  // difference cancels to roundoff and cannot be integrated directly.
  const double span = x_right - x_left;
  const double r_cut = std::min(1e-3 * span, 0.1 * dist);
  const double h0 = std::min(4e-3 * span, 0.2 * dist);
  const double d2 = (uz(x + h0) - 2.0 * ux + uz(x - h0)) / (h0 * h0);
  const double d4 = (uz(x + 2.0 * h0) - 4.0 * uz(x + h0) + 6.0 * ux -
                     4.0 * uz(x - h0) + uz(x - 2.0 * h0)) /
                    (h0 * h0 * h0 * h0);
  const double inner =
      -d2 * std::pow(r_cut, 2.0 - 2.0 * a) / (2.0 - 2.0 * a) -
      (d4 / 12.0) * std::pow(r_cut, 4.0 - 2.0 * a) / (4.0 - 2.0 * a);

  // split at the radii where x +- r crosses the boundary
  std::vector<double> knots{r_cut};
  for (double k : {x - x_left, x_right - x})
    if (k > r_cut && k < r_far) knots.push_back(k);
  knots.push_back(r_far);
  std::sort(knots.begin(), knots.end());

  Budget budget;
  double body = 0.0;
  const double tol_piece = 0.25 * tol / static_cast<double>(knots.size());
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    body += integrate(f, knots[i], knots[i + 1], tol_piece, budget);
  if (budget.depth_exhausted)
    throw QuadratureError(
        "pv_reference_apply: adaptive refinement hit depth limit before "
        "reaching the requested tolerance");

  // beyond r_far both shifted arguments are outside the support
  const double tail = ux * std::pow(r_far, -2.0 * a) / a;

  const double c =
      std::pow(4.0, a) * gamma_fn(0.5 + a) / (std::sqrt(M_PI) * std::fabs(gamma_fn(-a)));
  return c * (inner + body + tail);
}

}  // namespace fracheat
