#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsplit/error.hpp"
#include "qsplit/splitter.hpp"

using namespace qsplit;
constexpr double kPi = std::numbers::pi;

namespace {

SpectralState example_state() {
  const double r2 = 1 / std::sqrt(2.0);
  return SpectralState(BasisDescriptor::full_well(), {{3, r2}, {6, r2}}, true);
}

// <phi_1 | n-th chamber mode> by quadrature.
double overlap(const BasisDescriptor& b, std::size_t n) {
  auto f = [&](double x) {
    return eigenfunction(BasisDescriptor::full_well(), 1, x) * eigenfunction(b, n, x);
  };
  return integrate(f, b.lo(), b.hi(), IntegrateOptions{1e-13, 60, 16 + 2 * static_cast<int>(n)});
}

}  // namespace

TEST_CASE("fixed nodes") {
  CHECK(is_fixed_node(example_state(), 2.0 / 3.0));
  CHECK_FALSE(is_fixed_node(example_state(), 2.0 / 9.0));
  const SpectralState ground(BasisDescriptor::full_well(), {{1, 1.0}}, true);
  for (double x : {0.1, 0.5, 0.77}) CHECK_FALSE(is_fixed_node(ground, x));
  CHECK_THROWS_AS(decompose_fixed(example_state(), 0.5), PreconditionError);
}

TEST_CASE("fixed-node decomposition") {
  const SplitResult r = decompose_fixed(example_state(), 2.0 / 3.0);
  REQUIRE(r.left.size() == 2);
  REQUIRE(r.right.size() == 2);
  CHECK(r.left.terms()[0].n == 2);
  CHECK(r.left.terms()[1].n == 4);
  CHECK(std::abs(r.left.terms()[0].c) == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK(r.right.terms()[0].n == 1);
  CHECK(std::abs(r.right.terms()[1].c) == doctest::Approx(1 / std::sqrt(6.0)));
  CHECK(r.energy_left == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(r.energy_right == doctest::Approx(7.5).epsilon(1e-14));
  CHECK(r.norm_left_sq == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("single eigenstate at its node") {
  const SpectralState phi2(BasisDescriptor::full_well(), {{2, 1.0}}, true);
  const SplitResult r = decompose_fixed(phi2, 0.5);
  // Quadrature overlaps with the chamber ground states.
  auto ov = [&](const BasisDescriptor& b) {
    auto f = [&](double x) { return eigenfunction(BasisDescriptor::full_well(), 2, x) * eigenfunction(b, 1, x); };
    return integrate(f, b.lo(), b.hi(), 1e-13);
  };
  CHECK(r.left.terms()[0].c.real() == doctest::Approx(ov(BasisDescriptor::sub_left(0.5))).epsilon(1e-12));
  CHECK(r.right.terms()[0].c.real() == doctest::Approx(ov(BasisDescriptor::sub_right(0.5))).epsilon(1e-12));
  CHECK(std::abs(r.left.terms()[0].c) == doctest::Approx(std::sqrt(0.5)));
  CHECK(r.energy_left / r.norm_left_sq == doctest::Approx(4.0));
  CHECK(r.energy_left == doctest::Approx(2.0));
}

TEST_CASE("collapse bookkeeping for the fixed-node split") {
  const SplitResult r = decompose_fixed(example_state(), 2.0 / 3.0);
  const auto right_present = collapse(r, Side::Right, Outcome::Present);
  CHECK(right_present.probability == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(right_present.post_energy == doctest::Approx(22.5).epsilon(1e-14));
  CHECK_FALSE(right_present.particle_found_left);
  const auto left_absent = collapse(r, Side::Left, Outcome::Absent);
  CHECK(left_absent.probability == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const auto right_absent = collapse(r, Side::Right, Outcome::Absent);
  CHECK(right_absent.probability == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(right_absent.post_energy == doctest::Approx(22.5).epsilon(1e-14));
  CHECK(right_absent.post_state.norm_sq() == doctest::Approx(1.0));
  CHECK(right_absent.post_state.normalized());
}

TEST_CASE("collapse onto an empty branch is impossible") {
  SplitResult r;
  r.left = SpectralState(BasisDescriptor::sub_left(0.5), {{1, 1.0}}, true);
  r.right = SpectralState(BasisDescriptor::sub_right(0.5), {}, false);
  r.norm_left_sq = 1.0;
  r.energy_left = 4.0;
  CHECK_THROWS_AS(collapse(r, Side::Right, Outcome::Present), ImpossibleOutcome);
  CHECK(collapse(r, Side::Right, Outcome::Absent).probability == 1.0);
}

TEST_CASE("sudden split: collapse leaves 1 E0") {
  for (double e : {0.03, 0.1, 0.5, 0.8}) {
    const SplitResult r = sudden_split(SplitSpec::make(e), 500);
    const auto m = collapse(r, Side::Right, Outcome::Absent);
    CHECK(m.post_energy == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("overlap coefficients") {
  // sqrt(2) sin(pi x) against 2 sin(2 pi x) on [0, 1/2].
  const double q = integrate([](double x) { return std::sqrt(2.0) * std::sin(kPi * x) * 2 * std::sin(2 * kPi * x); },
                             0, 0.5, 1e-13);
  CHECK(coeff_a(1, 0.5) == doctest::Approx(q).epsilon(1e-12));
  CHECK(coeff_a(1, 0.5) == doctest::Approx(0.600211).epsilon(1e-6));
  CHECK(coeff_a(1, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::fabs(coeff_a(3, 1e-9)) < 1e-8);
  for (std::size_t n : {1u, 2u, 7u, 20u}) {
    CHECK(coeff_a(n, 0.3) == doctest::Approx(overlap(BasisDescriptor::sub_left(0.7), n)).epsilon(1e-11));
    CHECK(coeff_b(n, 0.3) == doctest::Approx(overlap(BasisDescriptor::sub_right(0.3), n)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(coeff_a(1, 0.0), PreconditionError);
  CHECK_THROWS_AS(coeff_b(1, 1.0), PreconditionError);
}

TEST_CASE("trap probability") {
  CHECK(trap_probability(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  const double q = integrate([](double x) { return 2 * std::sin(kPi * x) * std::sin(kPi * x); }, 0.9, 1.0, 1e-14);
  CHECK(trap_probability(0.1) == doctest::Approx(q).epsilon(1e-11));
  CHECK(trap_probability(0.1) == doctest::Approx(0.0064513).epsilon(1e-5));
  // Cancellation-free at tiny eps: (2/3) pi^2 eps^3 leading term.
  CHECK(trap_probability(1e-6) == doctest::Approx(2.0 / 3.0 * kPi * kPi * 1e-18).epsilon(1e-9));
  CHECK(trap_probability_series(0.01) == doctest::Approx(trap_probability(0.01)).epsilon(1e-6));
  double s = 0.0;
  const std::size_t N = 200000;
  for (std::size_t n = N; n >= 1; --n) s += coeff_b(n, 0.1) * coeff_b(n, 0.1);
  const double tail = 4 * 0.1 * std::pow(std::sin(0.1 * kPi), 2) / (kPi * kPi * N);
  CHECK(std::fabs(s - trap_probability(0.1)) <= 1.1 * tail);
}

TEST_CASE("left norm") {
  const double q = integrate([](double x) { return 2 * std::sin(kPi * x) * std::sin(kPi * x); }, 0, 0.9, 1e-14);
  CHECK(norm_left_sq_closed(0.1) == doctest::Approx(q).epsilon(1e-12));
  CHECK(norm_left_sq_closed(0.1) == doctest::Approx(0.9935487).epsilon(1e-6));
  CHECK(norm_left_sq_closed(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double e : {0.001, 0.2, 0.5, 0.77, 0.999}) {
    CHECK(norm_left_sq_spectral(e) == doctest::Approx(norm_left_sq_closed(e)).epsilon(1e-12));
    CHECK(norm_left_sq_closed(e) + norm_right_sq_closed(e) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(norm_right_sq_closed(e) == doctest::Approx(norm_left_sq_closed(1 - e)).epsilon(1e-13));
  }
  const PartialSum p = norm_left_sq_partial(0.1, 100000);
  CHECK(std::fabs(p.value + p.tail_estimate - norm_left_sq_closed(0.1)) < 1e-12);
  CHECK(p.tail_estimate > 0);
}

TEST_CASE("renormalized energies") {
  CHECK(renormalized_energy_left(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  for (double e : {0.01, 0.1, 0.37, 0.9}) {
    CHECK(renormalized_energy_left(e) + renormalized_energy_right(e) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(renormalized_energy_right(e) == doctest::Approx(renormalized_energy_left(1 - e)).epsilon(1e-12));
    const PartialSum c = renormalized_energy_left_constructive(e, 20000);
    CHECK(std::fabs(c.value + c.tail_estimate - renormalized_energy_left(e)) < 1e-11);
  }
}

TEST_CASE("naive energy sums grow linearly") {
  const double a = naive_energy_partial(0.1, 100000);
  const double b = naive_energy_partial(0.1, 200000);
  CHECK(b / a == doctest::Approx(2.0).epsilon(0.05));
  // Slope oracle: a_n^2 n^2 -> 4 beta sin^2(pi eps) / pi^2.
  const double beta = 0.5;
  const double slope = 4 * beta * std::pow(std::sin(0.5 * kPi), 2) / (kPi * kPi) / (beta * beta);
  const double fit = (naive_energy_partial(0.5, 100000) - naive_energy_partial(0.5, 10000)) / 90000.0;
  CHECK(fit == doctest::Approx(slope).epsilon(1e-3));
}

TEST_CASE("sudden split result") {
  const SplitResult r = sudden_split(SplitSpec::make(0.1), 25000);
  CHECK(r.left.size() == 25000);
  CHECK(r.energy_left + r.energy_right == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::fabs(r.left.norm_sq() + r.right.norm_sq() - 1.0) <= r.tail_bound);
  CHECK(r.left.basis() == BasisDescriptor::sub_left(0.9));
  CHECK_THROWS_AS(SplitSpec::make(1.0), PreconditionError);
  const auto rows = coefficient_rows(0.1, 10);
  REQUIRE(rows.size() == 10);
  CHECK(rows[3][1] == coeff_a(4, 0.1));
}
