#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsplit/error.hpp"
#include "qsplit/fatstate.hpp"

using namespace qsplit;
constexpr double kPi = std::numbers::pi;

TEST_CASE("fat-tail weights") {
  CHECK(fat_tail_density(0.5, 1.0) == doctest::Approx(1.0 / (1.5 * std::log(1.5) * std::log(1.5))));
  const FatTailWeights w = fat_weights(0.5, 10000);
  double s = 0.0;
  for (double p : w.p) s += p;
  CHECK(s + w.tail_mass == doctest::Approx(1.0).epsilon(1e-12));
  // Independent normalization: longer explicit sum and the integral tail with
  // its first two endpoint corrections.
  double direct = 0.0;
  const std::size_t M = 4000000;
  for (std::size_t n = M; n >= 1; --n) direct += fat_tail_density(0.5, static_cast<double>(n));
  const double a = M + 0.5;
  const double f = 1 / (a * std::log(a) * std::log(a));
  const double tail = 1 / std::log(a) - f / 2;
  CHECK(w.normalization == doctest::Approx(direct + tail).epsilon(1e-9));
  // tail mass decays like 1/ln(L)
  CHECK(w.tail_mass * w.normalization == doctest::Approx(1 / std::log(10000.5)).epsilon(1e-3));
  CHECK_THROWS_AS(fat_weights(0.0, 100), DomainError);
  CHECK_THROWS_AS(fat_weights(-0.3, 100), DomainError);
  CHECK_THROWS_AS(fat_weights(0.5, 5), PreconditionError);
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy({0.5, 0.5}) == doctest::Approx(std::log(2.0)));
  CHECK(von_neumann_entropy({1.0, 0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(von_neumann_entropy({0.5, -0.1, 0.6}), DomainError);
}

TEST_CASE("inverse-square entropy is finite") {
  // S = ln(pi^2/6) - (12/pi^2) zeta'(2)
  const double zeta_prime_2 = -0.93754825431584375370;
  const double oracle = std::log(kPi * kPi / 6) - 12 / (kPi * kPi) * zeta_prime_2;
  const auto e = inverse_square_entropy(1000000);
  CHECK(e.value == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(e.value == doctest::Approx(1.6376).epsilon(1e-4));
  CHECK(std::fabs(inverse_square_entropy(100000).value - e.value) < 1e-4);
}

TEST_CASE("fat-tail entropy grows") {
  const EntropyReport r = entropy_growth(0.5, {100, 1000, 10000, 100000, 1000000});
  for (std::size_t i = 1; i < r.entropy_at_cutoff.size(); ++i) {
    CHECK(r.entropy_at_cutoff[i] > r.entropy_at_cutoff[i - 1]);
  }
  CHECK(r.growth_model_fit > 0);
  CHECK_THROWS_AS(entropy_growth(0.5, {100, 1000}), PreconditionError);
}

TEST_CASE("sudden split entropy vanishes without a barrier") {
  CHECK(sudden_split_entropy(1e-4, 100000).value < 1e-6);
  CHECK(sudden_split_entropy(0.3, 100000).value > sudden_split_entropy(0.1, 100000).value);
}

TEST_CASE("growth classifier") {
  const auto cuts = decade_cutoffs(1000, 1000000);
  REQUIRE(cuts.size() == 4);
  auto partial = [&](auto term) {
    std::vector<double> out;
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t n = 2; n <= cuts.back(); ++n) {
      s += term(static_cast<double>(n));
      if (n == cuts[k]) {
        out.push_back(s);
        ++k;
      }
    }
    return out;
  };
  CHECK(classify_growth(cuts, partial([](double n) { return 1 / n; })).divergent);
  CHECK(classify_growth(cuts, partial([](double n) { return 1 / (n * std::log(n)); })).divergent);
  CHECK_FALSE(classify_growth(cuts, partial([](double n) { return 1 / (n * n); })).divergent);
  CHECK_FALSE(classify_growth(cuts, partial([](double n) { return 1 / (n * std::pow(std::log(n), 2)); })).divergent);
}

TEST_CASE("spectra") {
  CHECK(spectrum_energy(Spectrum::SquareWell, 3) == 9.0);
  CHECK(spectrum_energy(Spectrum::Oscillator, 3) == 3.5);
  CHECK(spectrum_energy(Spectrum::Coulomb, 2) == -0.25);
  CHECK(spectrum_size(Spectrum::Coulomb, 3) == 9.0);
  CHECK(spectrum_from_string(to_string(Spectrum::Oscillator)) == Spectrum::Oscillator);
}

TEST_CASE("divergent entropy implies divergent energy or size") {
  const FatTailWeights w = fat_weights(0.5, 1000000);
  const auto cuts = decade_cutoffs(1000, 1000000);
  const auto well = conjecture_check(w, Spectrum::SquareWell, cuts);
  CHECK(well.entropy_divergent);
  CHECK(well.energy_divergent);
  const auto coulomb = conjecture_check(w, Spectrum::Coulomb, cuts);
  CHECK_FALSE(coulomb.energy_divergent);
  CHECK(coulomb.size_divergent);
  CHECK(conjecture_check(w, Spectrum::Oscillator, cuts).holds());
}

TEST_CASE("oscillator fat-tail state") {
  const FatTailWeights w = fat_weights(0.5, 2000);
  // psi at the origin from the even Hermite values phi_{2k}(0) = (-1)^k pi^(-1/4) sqrt((2k-1)!!/(2k)!!).
  double direct = 0.0;
  double ratio = 1.0;
  for (std::size_t n = 2; n <= 2000; n += 2) {
    ratio *= std::sqrt((n - 1.0) / n);
    const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
    direct += std::sqrt(w.weight(n)) * sign * std::pow(kPi, -0.25) * ratio;
  }
  CHECK(oscillator_fat_psi(w, 2000, 0.0) == doctest::Approx(direct).epsilon(1e-10));
  OscillatorOptions opt;
  opt.with_smoothness = false;
  const auto rep = oscillator_asymptote(0.5, {8.0, 12.0, 16.0}, 2000, opt);
  CHECK(rep.at("norm_within_10") <= rep.at("norm_within_20"));
  CHECK(rep.at("norm_within_20") <= rep.at("norm_within_40"));
  CHECK(rep.at("norm_within_40") <= 1.0);
}
