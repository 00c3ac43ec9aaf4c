#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsplit/evolve.hpp"
#include "qsplit/splitter.hpp"
#include "qsplit/wellcore.hpp"

namespace qsplit {

/// p_n = (1/N_nu) / ((n + nu) ln^2(n + nu)) for n = 1..cutoff.
struct FatTailWeights {
  double nu = 0.5;
  std::size_t cutoff = 0;
  std::vector<double> p;  // p[n-1]
  double normalization = 0.0;  // N_nu
  double tail_mass = 0.0;      // sum_{n > cutoff} p_n
  double normalization_error = 0.0;

  [[nodiscard]] double weight(std::size_t n) const { return p.at(n - 1); }
};

/// Unnormalized fat-tail density f(n) = 1/((n + nu) ln^2(n + nu)).
double fat_tail_density(double nu, double n);

/// sum_{n >= 1} f(n): explicit sum up to max(cutoff, 1e6) plus the
/// Euler-Maclaurin remainder 1/ln(a+nu) - f(a)/2 - f'(a)/12.
double fat_tail_normalization(double nu, std::size_t explicit_terms = 1000000);

FatTailWeights fat_weights(double nu, std::size_t cutoff);

/// c_n = sqrt(p_n) for n = 1..N on the given basis.
SpectralState fat_tail_state(const FatTailWeights& w, std::size_t N,
                             const BasisDescriptor& basis = BasisDescriptor::full_well());

/// -sum p ln p in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const std::vector<double>& p);

/// Entropy of the fat-tail distribution resolved up to the cutoff; the
/// omitted mass is kept as a single outcome.
double fat_tail_entropy(const FatTailWeights& w, std::size_t cutoff);

struct EntropyReport {
  double nu = 0.5;
  std::vector<std::size_t> cutoffs;
  std::vector<double> entropy_at_cutoff;
  double growth_model_fit = 0.0;  // A in S = A ln ln L + B
  double fit_intercept = 0.0;
  double fit_max_residual = 0.0;
};

EntropyReport entropy_growth(double nu, const std::vector<std::size_t>& cutoffs);

struct EntropyEstimate {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Entropy of p_n = (6/pi^2)/n^2 from the partial sum to the cutoff plus
/// the Euler-Maclaurin remainder.
EntropyEstimate inverse_square_entropy(std::size_t cutoff);

/// Entropy of the normalized energy distribution of one chamber after a
/// sudden split, with the same kind of remainder correction.
EntropyEstimate sudden_split_entropy(double epsilon, std::size_t cutoff, Side side = Side::Left);

enum class Spectrum { SquareWell, Oscillator, Coulomb, CoulombInverseN };

std::string to_string(Spectrum s);
Spectrum spectrum_from_string(const std::string& s);
double spectrum_energy(Spectrum s, std::size_t n);
/// Size functional of the n-th level: <x> = 1/2 for the well, <x^2> = n + 1/2
/// for the oscillator, n^2 for Coulomb levels.
double spectrum_size(Spectrum s, std::size_t n);

struct GrowthClass {
  bool divergent = false;
  double last_decade_increase = 0.0;
  double decay_exponent = 0.0;  // increments ~ (ln L)^-s
};

inline constexpr double kPlateauThreshold = 1e-9;

/// Partial sums sampled at increasing cutoffs (normally decades). A series
/// counts as convergent when its last-decade increase is at most
/// 100 * kPlateauThreshold. Otherwise the increments d_k are compared with
/// powers of ln L: they must fall faster than (ln L)^-1.5 for the series to
/// count as convergent (a tail ~ 1/ln L converges, ln ln L does not).
GrowthClass classify_growth(const std::vector<std::size_t>& cutoffs,
                            const std::vector<double>& partial_sums);

std::vector<std::size_t> decade_cutoffs(std::size_t first, std::size_t last);

ProbeReport energy_divergence(const FatTailWeights& w, Spectrum spectrum,
                              const std::vector<std::size_t>& cutoffs);

struct ConjectureRow {
  Spectrum spectrum = Spectrum::SquareWell;
  bool entropy_divergent = false;
  bool energy_divergent = false;
  bool size_divergent = false;
  [[nodiscard]] bool holds() const { return !entropy_divergent || energy_divergent || size_divergent; }
};

ConjectureRow conjecture_check(const FatTailWeights& w, Spectrum spectrum,
                               const std::vector<std::size_t>& cutoffs);

/// psi(x) = sum_{n=1}^{n_max} sqrt(p_n) phi_n(x) on the oscillator basis.
double oscillator_fat_psi(const FatTailWeights& w, std::size_t n_max, double x);

struct OscillatorOptions {
  bool with_norms = true;       // integrals of psi^2 over [-X, X]
  bool with_smoothness = true;  // second differences on the sample range
};

ProbeReport oscillator_asymptote(double nu, const std::vector<double>& x_samples, std::size_t n_max,
                                 const OscillatorOptions& opt = {});

std::vector<std::vector<double>> weight_rows(const FatTailWeights& w);
inline const std::vector<std::string> kWeightHeader = {"n", "p_n"};

void to_json(nlohmann::json& j, const EntropyReport& r);

}  // namespace qsplit
