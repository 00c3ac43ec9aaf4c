#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsplit/error.hpp"
#include "qsplit/wellcore.hpp"

using namespace qsplit;

TEST_CASE("units for an electron in a 1 angstrom well") {
  const WellUnits u = WellUnits::electron_angstrom(1.0);
  // pi^2 hbar^2 / (2 m L^2) evaluated by hand with CODATA values.
  const double hbar = 1.054571817e-34;
  const double m = 9.1093837015e-31;
  const double e0 = std::numbers::pi * std::numbers::pi * hbar * hbar / (2 * m * 1e-20);
  CHECK(u.E0() == doctest::Approx(e0).epsilon(1e-14));
  CHECK(u.tau() == doctest::Approx(1.7504e-17).epsilon(1e-4));
  CHECK(u.from_tau(u.to_tau(3e-17)) == doctest::Approx(3e-17));
}

TEST_CASE("eigenfunctions") {
  CHECK(eigenfunction(BasisDescriptor::full_well(), 1, 0.5) == doctest::Approx(std::sqrt(2.0)));
  CHECK(eigenfunction(BasisDescriptor::sub_left(2.0 / 3.0), 2, 1.0 / 3.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(eigenfunction(BasisDescriptor::sub_right(1.0 / 3.0), 1, 5.0 / 6.0) ==
        doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(eigenfunction(BasisDescriptor::sub_left(0.5), 1, 0.75) == 0.0);
}

TEST_CASE("eigenenergies") {
  CHECK(eigenenergy(BasisDescriptor::full_well(), 3) == 9.0);
  CHECK(eigenenergy(BasisDescriptor::sub_left(2.0 / 3.0), 2) == doctest::Approx(9.0));
  CHECK(eigenenergy(BasisDescriptor::sub_right(1.0 / 3.0), 2) == doctest::Approx(36.0));
  CHECK(eigenenergy(BasisDescriptor::oscillator(), 4) == 4.5);
}

TEST_CASE("adaptive quadrature") {
  const double pi = std::numbers::pi;
  CHECK(integrate([pi](double x) { return std::sin(pi * x) * std::sin(pi * x); }, 0, 1, 1e-12) ==
        doctest::Approx(0.5).epsilon(1e-12));
  const double p = 0.1 - std::sin(0.2 * pi) / (2 * pi);
  CHECK(integrate([pi](double x) { return 2 * std::sin(pi * x) * std::sin(pi * x); }, 0.9, 1, 1e-12) ==
        doctest::Approx(p).epsilon(1e-11));
  auto phi1sq = [](double x) {
    const double v = eigenfunction(BasisDescriptor::full_well(), 1, x);
    return v * v;
  };
  CHECK(integrate(phi1sq, 0, 1, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(integrate(phi1sq, 1, 0, 1e-12), PreconditionError);
  CHECK_THROWS_AS(integrate([](double x) { return x < 0.3 ? 0.0 : 1.0 / std::sqrt(x - 0.3 + 1e-300); },
                            0, 1, IntegrateOptions{1e-14, 12, 8}),
                  ConvergenceError);
}

TEST_CASE("state energies of the fixed-node example") {
  const double r2 = 1 / std::sqrt(2.0);
  const double r3 = 1 / std::sqrt(3.0);
  const double r6 = 1 / std::sqrt(6.0);
  const SpectralState full(BasisDescriptor::full_well(), {{3, r2}, {6, r2}}, true);
  const SpectralState left(BasisDescriptor::sub_left(2.0 / 3.0), {{2, r3}, {4, r3}}, false);
  const SpectralState right(BasisDescriptor::sub_right(1.0 / 3.0), {{1, r6}, {2, r6}}, false);
  CHECK(state_energy(full) == doctest::Approx(22.5).epsilon(1e-14));
  CHECK(state_energy(left) == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(state_energy(right) == doctest::Approx(7.5).epsilon(1e-14));
}

TEST_CASE("spectral state invariants") {
  const auto fw = BasisDescriptor::full_well();
  CHECK_THROWS_AS(SpectralState(fw, {{2, 1.0}, {1, 0.1}}, false), PreconditionError);
  CHECK_THROWS_AS(SpectralState(fw, {{0, 1.0}}, false), PreconditionError);
  CHECK_THROWS_AS(SpectralState(fw, {{1, 0.8}}, true), PreconditionError);
  CHECK_THROWS_AS(SpectralState(fw, {{1, 1.1}}, false), PreconditionError);
  CHECK_THROWS_AS(SpectralState(fw, {{1, std::nan("")}}, false), PreconditionError);
  CHECK_NOTHROW(SpectralState(BasisDescriptor::oscillator(), {{0, 1.0}}, true));
  const SpectralState s = SpectralState::normalized_copy(fw, {{1, 3.0}, {2, 4.0}});
  CHECK(s.norm_sq() == doctest::Approx(1.0));
  CHECK(std::abs(s.terms()[0].c) == doctest::Approx(0.6));
  const SpectralState t = s.truncated(1, true);
  CHECK(t.size() == 1);
  CHECK(t.norm_sq() == doctest::Approx(1.0));
  CHECK(s.truncated(1, false).norm_sq() == doctest::Approx(0.36));
}

TEST_CASE("JSON round trip") {
  const SpectralState s(BasisDescriptor::sub_right(0.25), {{1, {0.6, 0.0}}, {4, {0.0, -0.8}}}, true);
  const nlohmann::json j = s;
  const SpectralState back = spectral_state_from_json(j);
  CHECK(back.basis() == s.basis());
  REQUIRE(back.size() == 2);
  CHECK(back.terms()[1].c == s.terms()[1].c);
  GridFunction g{0.0, 1.0, {{1.0, 2.0}, {3.0, -4.0}}, 0.5};
  const nlohmann::json jg = g;
  const auto g2 = jg.get<GridFunction>();
  CHECK(g2.samples == g.samples);
  CHECK(g2.time == 0.5);
}
