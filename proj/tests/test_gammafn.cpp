#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fracheat/gammafn.hpp"

using fracheat::gamma_fn;

TEST_CASE("gamma: classical values") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  // high-precision reference values
  CHECK(gamma_fn(-0.75) == doctest::Approx(-4.834146544295877749).epsilon(1e-12));
  CHECK(gamma_fn(0.25) == doctest::Approx(3.625609908221908312).epsilon(1e-12));
}

TEST_CASE("gamma: recurrence oracle at -0.75") {
  CHECK(gamma_fn(0.25) ==
        doctest::Approx(-0.75 * gamma_fn(-0.75)).epsilon(1e-12));
}

TEST_CASE("gamma: recurrence and reflection on a 1000-point sample") {
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const double z = -0.99 + (10.0 + 0.99) * k / 999.0;
    const double dist_pole = std::fabs(z - std::round(z));
    if (z <= 0.5 && dist_pole < 1e-3) continue;  // stay off the poles
    if (std::fabs(z) < 1e-3) continue;
    CAPTURE(z);
    CHECK(gamma_fn(z + 1.0) == doctest::Approx(z * gamma_fn(z)).epsilon(1e-12));
    if (z < 0.5 && std::fabs(fracheat::sin_pi(z)) > 1e-3) {
      CHECK(gamma_fn(z) * gamma_fn(1.0 - z) ==
            doctest::Approx(M_PI / fracheat::sin_pi(z)).epsilon(1e-12));
    }
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("gamma: poles rejected") {
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}
