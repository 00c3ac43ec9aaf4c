#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsplit/error.hpp"
#include "qsplit/specfun.hpp"
#include "qsplit/wellcore.hpp"

using namespace qsplit;
using specfun::digamma;
using specfun::trigamma;

namespace {

// gamma = H_N - ln N - 1/(2N) + 1/(12 N^2) - 1/(120 N^4)
double euler_gamma_oracle() {
  const int N = 1000;
  double h = 0.0;
  for (int k = N; k >= 1; --k) h += 1.0 / k;
  const double n = N;
  return h - std::log(n) - 1.0 / (2 * n) + 1.0 / (12 * n * n) - 1.0 / (120 * n * n * n * n);
}

}  // namespace

TEST_CASE("digamma at 1 is minus Euler's constant") {
  const double g = euler_gamma_oracle();
  CHECK(digamma(1.0).value == doctest::Approx(-g).epsilon(1e-14));
  CHECK(digamma(1.0).abs_error_bound < 1e-12);
}

TEST_CASE("digamma recurrence and half-integer value") {
  CHECK(digamma(2.0).value == doctest::Approx(digamma(1.0).value + 1.0).epsilon(1e-15));
  const double expect = -euler_gamma_oracle() - 2.0 * std::log(2.0);
  CHECK(digamma(0.5).value == doctest::Approx(expect).epsilon(1e-14));
  CHECK(digamma(1.5).value - 2.0 == doctest::Approx(digamma(0.5).value).epsilon(1e-14));
  for (double u : {0.01, 0.3, 1.7, 9.9, 10.1, 55.0, 1e4}) {
    CHECK(std::fabs(digamma(u + 1).value - digamma(u).value - 1.0 / u) < 1e-12 * (1 + 1.0 / u));
  }
}

TEST_CASE("digamma rejects non-positive arguments") {
  CHECK_THROWS_AS(digamma(0.0), DomainError);
  CHECK_THROWS_AS(digamma(-1.5), DomainError);
  CHECK_THROWS_AS(trigamma(0.0), DomainError);
}

TEST_CASE("trigamma at 1 and 2") {
  double s = 0.0;
  const int N = 1000000;
  for (int k = N; k >= 1; --k) s += 1.0 / (static_cast<double>(k) * k);
  const double n = N;
  const double oracle = s + 1.0 / n - 1.0 / (2 * n * n) + 1.0 / (6 * n * n * n);
  CHECK(trigamma(1.0).value == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(trigamma(1.0).value == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-15));
  CHECK(trigamma(2.0).value ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1.0).epsilon(1e-14));
  for (double u = 0.05; u < 30; u += 0.37) {
    CHECK(std::fabs(trigamma(u + 1).value - (trigamma(u).value - 1.0 / (u * u))) <
          1e-12 * (1 + 1.0 / (u * u)));
  }
}

TEST_CASE("Hermite functions at the origin") {
  CHECK(specfun::hermite_fn(0, 0.0) == doctest::Approx(0.7511255444649425).epsilon(1e-15));
  CHECK(specfun::hermite_fn(1, 0.0) == 0.0);
  CHECK(specfun::hermite_fn(3, 0.0) == 0.0);
  // phi_2(0) = -pi^(-1/4) / sqrt(2)
  CHECK(specfun::hermite_fn(2, 0.0) == doctest::Approx(-0.7511255444649425 / std::sqrt(2.0)));
}

TEST_CASE("Hermite functions are normalized") {
  for (std::size_t n : {0u, 5u, 50u, 500u}) {
    const double edge = std::sqrt(2.0 * n + 1.0) + 12.0;
    auto f = [n](double x) {
      const double v = specfun::hermite_fn(n, x);
      return v * v;
    };
    const int panels = 8 + 4 * static_cast<int>(n);
    const double v = integrate(f, -edge, edge, IntegrateOptions{1e-11, 60, panels});
    CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("Hermite batch matches single evaluation and survives large x") {
  const auto all = specfun::hermite_fns(200, 7.3);
  REQUIRE(all.size() == 201);
  CHECK(all[137] == doctest::Approx(specfun::hermite_fn(137, 7.3)).epsilon(1e-14));
  CHECK(std::isfinite(specfun::hermite_fn(10000, 150.0)));
  CHECK(specfun::hermite_fn(0, 40.0) == 0.0);
  CHECK(std::fabs(specfun::hermite_fn(20000, 10.0)) < 1.0);
}

TEST_CASE("sin_pi and cos_pi hit exact zeros") {
  CHECK(specfun::sin_pi(3.0) == 0.0);
  CHECK(specfun::sin_pi(-7.0) == 0.0);
  CHECK(specfun::cos_pi(2.5) == 0.0);
  CHECK(specfun::sin_pi(0.5) == 1.0);
  CHECK(specfun::sin_pi(1e6 + 0.25) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}
