#include <catch2/catch_amalgamated.hpp>

#include <cfloat>
#include <cmath>
#include <complex>

#include "gegen/ellipse_bounds.hpp"
#include "gegen/gegenbauer_poly.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using gegen::GegenbauerParam;
using cd = std::complex<double>;

TEST_CASE("eval_recurrence examples", "[poly]") {
  for (double lam : {-0.3, 0.5, 2.0}) {
    CHECK_THAT(gegen::eval_recurrence(GegenbauerParam(lam), 1, 0.3), WithinRel(0.6 * lam, 1e-15));
  }
  const GegenbauerParam p(0.7);
  CHECK_THAT(gegen::eval_recurrence(p, 6, -0.4), WithinRel(gegen::eval_recurrence(p, 6, 0.4), 1e-15));
  CHECK_THAT(gegen::eval_recurrence(GegenbauerParam(0.5), 4, 0.5), WithinRel(-0.2890625, 1e-15));
  CHECK_THROWS_AS(gegen::eval_recurrence(p, -1, 0.1), std::domain_error);
}

TEST_CASE("eval_recurrence agrees with the explicit sum", "[poly][oracle]") {
  for (double lam : {-0.3, 0.5, 1.5, 3.2}) {
    for (int n = 0; n <= 25; ++n) {
      for (double x = -1.0; x <= 1.0; x += 0.125) {
        long double mag = 0;
        const double ref = static_cast<double>(oracle::gegenbauer_explicit(lam, n, x, &mag));
        const double scale = std::max(1.0, std::abs(gegen::max_abs_bound(GegenbauerParam(lam), n)));
        // the oracle itself loses about eps_ld * sum|terms| to cancellation
        const double slack = 1e-12 * scale + 64 * LDBL_EPSILON * static_cast<double>(mag);
        CHECK_THAT(gegen::eval_recurrence(GegenbauerParam(lam), n, x), WithinAbs(ref, slack));
      }
    }
  }
}

TEST_CASE("complex argument: parity and conjugation", "[poly][property]") {
  const GegenbauerParam p(1.5);
  const cd z(0.3, 0.8);
  for (int n = 0; n <= 30; ++n) {
    const cd a = gegen::eval_recurrence(p, n, z);
    const cd b = gegen::eval_recurrence(p, n, -z);
    CHECK(std::abs(b - (n % 2 ? -a : a)) <= 1e-13 * std::abs(a));
    CHECK(std::abs(gegen::eval_recurrence(p, n, std::conj(z)) - std::conj(a)) <= 1e-13 * std::abs(a));
  }
}

TEST_CASE("eval_derivative examples", "[poly]") {
  CHECK_THAT(gegen::eval_derivative(GegenbauerParam(0.5), 1, 0.9), WithinRel(1.0, 1e-15));
  CHECK_THAT(gegen::eval_derivative(GegenbauerParam(1.5), 2, 0.0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(gegen::eval_derivative(GegenbauerParam(0.5), 3, 0.2), WithinRel(-1.2, 1e-14));
  CHECK_THROWS_AS(gegen::eval_derivative(GegenbauerParam(0.5), 0, 0.2), std::domain_error);
}

TEST_CASE("eval_derivative agrees with Legendre derivative and finite differences", "[poly][property]") {
  const GegenbauerParam half(0.5);
  for (int n = 1; n <= 40; ++n) {
    for (double x = -0.95; x < 0.96; x += 0.1) {
      const double ref = static_cast<double>(oracle::legendre_derivative(n, x));
      CHECK_THAT(gegen::eval_derivative(half, n, x), WithinAbs(ref, 1e-11 * std::max(1.0, std::abs(ref))));
    }
  }
  for (double lam : {-0.3, 1.5, 3.2}) {
    const GegenbauerParam p(lam);
    for (int n = 1; n <= 20; ++n) {
      for (double x = -0.9; x < 0.91; x += 0.15) {
        const double h = 1e-6;
        const double fd = (gegen::eval_recurrence(p, n, x + h) - gegen::eval_recurrence(p, n, x - h)) / (2 * h);
        const double d = gegen::eval_derivative(p, n, x);
        CHECK_THAT(d, WithinAbs(fd, 1e-6 * std::max(1.0, std::abs(d))));
      }
    }
  }
}

TEST_CASE("classical identities", "[poly][property]") {
  const GegenbauerParam half(0.5);
  const GegenbauerParam one(1.0);
  for (int n = 0; n <= 100; ++n) {
    for (double x = -1.0; x <= 1.0; x += 1.0 / 64) {
      CHECK_THAT(gegen::eval_recurrence(half, n, x), WithinAbs(static_cast<double>(oracle::legendre(n, x)), 1e-12));
    }
  }
  for (int n = 0; n <= 60; ++n) {
    for (double x = -0.99; x < 1.0; x += 0.0725) {
      const double ref = static_cast<double>(oracle::chebyshev_u(n, x));
      CHECK_THAT(gegen::eval_recurrence(one, n, x), WithinAbs(ref, 1e-11 * std::max(1.0, std::abs(ref))));
    }
  }
  const double eps = 1e-8;
  const GegenbauerParam tiny(eps);
  for (int n = 1; n <= 30; ++n) {
    for (double x = -0.99; x < 1.0; x += 0.0725) {
      CHECK_THAT(gegen::eval_recurrence(tiny, n, x) / eps, WithinAbs(2.0 / n * std::cos(n * std::acos(x)), 1e-6));
    }
  }
}

TEST_CASE("leading coefficient is 2^n g_n", "[poly][property]") {
  for (double lam : {-0.3, 0.5, 1.5, 3.2}) {
    const GegenbauerParam p(lam);
    for (int n = 1; n <= 20; ++n) {
      const double x = 1e6;
      const double lead = gegen::eval_recurrence(p, n, x) / std::pow(x, n);
      CHECK_THAT(lead, WithinRel(std::pow(2.0, n) * gegen::g_coeff(p, n), 1e-8));
    }
  }
}

TEST_CASE("Nevai-type weighted bound for lambda > 0", "[poly][property]") {
  for (double lam : {0.5, 1.5, 3.2}) {
    const GegenbauerParam p(lam);
    const double c = 2 * std::exp(1.0) * (2 + std::sqrt(2.0) * lam) / M_PI;
    for (int n = 0; n <= 100; n += 3) {
      const double h = gegen::h_norm(p, n);
      double worst = 0;
      for (int i = 0; i < 2001; ++i) {
        const double x = -1.0 + 2.0 * i / 2000;
        const double v = gegen::eval_recurrence(p, n, x);
        worst = std::max(worst, std::pow(1 - x * x, lam) * v * v);
      }
      CHECK(worst <= c * h);
    }
  }
}

TEST_CASE("eval_w_series examples", "[poly]") {
  const GegenbauerParam one(1.0);
  const double w = 1.5;
  double geometric = 0;
  for (int k = 0; k <= 5; ++k) geometric += std::pow(w, 5 - 2 * k);
  CHECK_THAT(gegen::eval_w_series(one, 5, cd(w)).real(), WithinRel(geometric, 1e-14));
  CHECK_THAT(gegen::eval_w_series(one, 5, cd(w)).real(),
             WithinRel(gegen::eval_recurrence(one, 5, 0.5 * (w + 1 / w)), 1e-14));
  CHECK(gegen::eval_w_series(GegenbauerParam(0.5), 0, cd(2, 1)) == cd(1, 0));
  const cd w8 = std::polar(1.3, M_PI / 5);
  const cd z8 = 0.5 * (w8 + 1.0 / w8);
  const GegenbauerParam half(0.5);
  CHECK(std::abs(gegen::eval_w_series(half, 8, w8) - gegen::eval_recurrence(half, 8, z8)) <=
        1e-11 * std::abs(gegen::eval_recurrence(half, 8, z8)));
  CHECK_THROWS_AS(gegen::eval_w_series(half, 3, cd(0.5, 0.5)), std::domain_error);
  CHECK_THROWS_AS(gegen::eval_w_series(half, 3, cd(1.0, 0.0)), std::domain_error);
}

TEST_CASE("normalized_on_ellipse examples", "[poly]") {
  const double rho = 1.7;
  CHECK_THAT(gegen::normalized_on_ellipse(GegenbauerParam(1.0), 400, cd(rho)).real(),
             WithinRel(1.0 / (1.0 - 1.0 / (rho * rho)), 1e-14));
  for (double lam : {-0.3, 0.5, 3.2}) {
    CHECK(gegen::normalized_on_ellipse(GegenbauerParam(lam), 0, cd(1.2, 0.4)) == cd(1.0, 0.0));
  }
  CHECK_THROWS_AS(gegen::normalized_on_ellipse(GegenbauerParam(0.5), 4, cd(0.3)), std::domain_error);

  // within the exact remainder of the limit at n = 200 on |w| = 1.2
  const GegenbauerParam half(0.5);
  const double r = gegen::remainder_exact(half, 200, 1.2);
  for (int j = 0; j < 64; ++j) {
    const cd w = std::polar(1.2, 2 * M_PI * j / 64);
    const cd limit = std::pow(1.0 - 1.0 / (w * w), -0.5);
    CHECK(std::abs(gegen::normalized_on_ellipse(half, 200, w) - limit) <= r * (1 + 1e-12));
  }
}

TEST_CASE("normalized_on_ellipse stays finite where g_n overflows", "[poly]") {
  const GegenbauerParam big(3.2);
  const cd w = std::polar(1.4, 0.3);
  const cd v = gegen::normalized_on_ellipse(big, 100000, w);
  CHECK(std::isfinite(v.real()));
  CHECK(std::abs(v - std::pow(1.0 - 1.0 / (w * w), -3.2)) < 1e-3);
}

TEST_CASE("normalized_on_ellipse equals C_n / (g_n w^n)", "[poly][property]") {
  for (double lam : {-0.3, 0.5, 1.5, 3.2}) {
    const GegenbauerParam p(lam);
    for (int n : {1, 5, 17, 40}) {
      for (int j = 0; j < 16; ++j) {
        const cd w = std::polar(1.5, 2 * M_PI * j / 16 + 0.1);
        const cd z = 0.5 * (w + 1.0 / w);
        const cd direct = gegen::eval_recurrence(p, n, z) / (gegen::g_coeff(p, n) * std::pow(w, n));
        CHECK(std::abs(gegen::normalized_on_ellipse(p, n, w) - direct) <= 1e-12 * std::abs(direct));
      }
    }
  }
}

TEST_CASE("value_at_one examples and closed form", "[poly]") {
  CHECK_THAT(gegen::value_at_one(GegenbauerParam(0.5), 9), WithinRel(1.0, 1e-14));
  CHECK_THAT(gegen::value_at_one(GegenbauerParam(1.0), 4), WithinRel(5.0, 1e-14));
  for (double lam : {-0.3, 0.5, 2.0}) CHECK(gegen::value_at_one(GegenbauerParam(lam), 0) == 1.0);
  for (double lam : {-0.3, 0.5, 1.5, 3.2}) {
    for (int n = 0; n <= 100; ++n) {
      CHECK_THAT(gegen::value_at_one(GegenbauerParam(lam), n),
                 WithinRel(gegen::eval_recurrence(GegenbauerParam(lam), n, 1.0), 1e-12));
    }
  }
}

TEST_CASE("max_abs_bound examples", "[poly]") {
  CHECK_THAT(gegen::max_abs_bound(GegenbauerParam(0.5), 50), WithinRel(1.0, 1e-13));
  CHECK_THAT(gegen::max_abs_bound(GegenbauerParam(2.0), 3), WithinRel(20.0, 1e-14));
  const GegenbauerParam neg(-0.3);
  const double d = gegen::calibrated_d_lambda(neg);
  CHECK_THAT(gegen::max_abs_bound(neg, 100), WithinRel(d * std::pow(100.0, -1.3), 1e-14));
  CHECK_THROWS_AS(gegen::calibrated_d_lambda(GegenbauerParam(0.5)), std::domain_error);
}

TEST_CASE("max_abs_bound dominates sampled maxima", "[poly][property]") {
  for (double lam : {-0.45, -0.3, -0.1, 0.5, 1.5}) {
    const GegenbauerParam p(lam);
    for (int n = 1; n <= 200; n += 13) {
      double worst = 0;
      for (int i = 0; i < 2001; ++i) worst = std::max(worst, std::abs(gegen::eval_recurrence(p, n, -1.0 + i / 1000.0)));
      CHECK(worst <= gegen::max_abs_bound(p, n) * (1 + 1e-12));
    }
  }
}
