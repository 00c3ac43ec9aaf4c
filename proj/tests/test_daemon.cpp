#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsplit/daemon.hpp"
#include "qsplit/error.hpp"
#include "qsplit/splitter.hpp"

using namespace qsplit;
constexpr double kPi = std::numbers::pi;

TEST_CASE("adiabatic work") {
  CHECK(adiabatic_delta_e_closed(0.5) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::fabs(adiabatic_delta_e_series(0.01) - adiabatic_delta_e_closed(0.01)) <= 1e-4);
  // Weighted chamber ground energies minus the initial energy, with the weights by quadrature.
  const double e = 0.23;
  const double p = integrate([](double x) { return 2 * std::sin(kPi * x) * std::sin(kPi * x); }, 1 - e, 1, 1e-14);
  const double oracle = (1 - p) / ((1 - e) * (1 - e)) + p / (e * e) - 1;
  CHECK(adiabatic_delta_e_closed(e) == doctest::Approx(oracle).epsilon(1e-12));
  const auto r = adiabatic_delta_e(e);
  CHECK(r.delta_e_quadrature == doctest::Approx(r.delta_e_exact).epsilon(1e-10));
}

TEST_CASE("insertion inequality and its zero") {
  CHECK(insertion_inequality_margin(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(insertion_inequality_margin(0.2) > 0);
  CHECK(insertion_inequality_margin(0.8) < 0);
  CHECK(luders_excess(0.8) == doctest::Approx(luders_excess(0.2)).epsilon(1e-12));
  CHECK(luders_excess(0.01) == doctest::Approx(2.0 / 3.0 * kPi * kPi * 0.01).epsilon(0.05));
  CHECK(bisect_luders_zero(0.1, 0.9, 1e-10) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("left energy with and without the measurement") {
  CHECK(energy_left_undisturbed(0.01) == doctest::Approx(1.0203).epsilon(3e-4));
  CHECK(std::fabs(energy_left_disturbed(0.01) - (1 + (2 + 2.0 / 3.0 * kPi * kPi) * 0.01)) < 1e-3);
  CHECK(energy_left_undisturbed(1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(energy_left_disturbed(1e-9) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(energy_left_undisturbed(0.6), PreconditionError);
  // undisturbed - (1 + 2 eps) is second order; the local exponent tends to 2 from below.
  const double a = energy_left_undisturbed(1e-3) - (1 + 2e-3);
  const double b = energy_left_undisturbed(1e-2) - (1 + 2e-2);
  CHECK(std::log(b / a) / std::log(10.0) >= 1.95);
}

TEST_CASE("erasure entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  const double p = trap_probability(0.01);
  const double exact = -p * std::log(p) - (1 - p) * std::log1p(-p);
  const double ratio = erasure_entropy_asymptotic(0.01) / exact;
  CHECK(ratio >= 0.9);
  CHECK(ratio <= 1.1);
}

TEST_CASE("daemon ledger") {
  const DaemonLedger half = daemon_ledger(0.5);
  CHECK(half.erasure_entropy_exact == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const DaemonLedger small = daemon_ledger(0.01);
  CHECK(small.extracted_energy == doctest::Approx(adiabatic_delta_e_closed(0.01)));
  CHECK(small.erasure_entropy_exact / small.extracted_energy <= 1e-2);
  CHECK(small.landauer_only_margin < 0);
  for (double e : epsilon_grid(1e-3, 0.5, 100)) CHECK(daemon_ledger(e).second_law_margin >= 0);
  CHECK_THROWS_AS(daemon_ledger(0.7), PreconditionError);
  const auto g = epsilon_grid(0.1, 0.5, 5);
  REQUIRE(g.size() == 5);
  CHECK(g[2] == doctest::Approx(0.3));
  CHECK(ledger_rows({half})[0][0] == 0.5);
}
