#include "qsplit/fatstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qsplit/error.hpp"
#include "qsplit/specfun.hpp"
#include "qsplit/summation.hpp"

namespace qsplit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinExplicitTerms = 1000000;

void check_nu(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError("fat-tail weights need nu > 0, got " + std::to_string(nu));
  }
}

double fat_tail_density_derivative(double nu, double x) {
  const double y = x + nu;
  const double ly = std::log(y);
  return -(ly + 2.0) / (y * y * ly * ly * ly);
}

// sum_{n > a} f(n) by Euler-Maclaurin.
double fat_tail_remainder(double nu, double a) {
  return 1.0 / std::log(a + nu) - 0.5 * fat_tail_density(nu, a) -
         fat_tail_density_derivative(nu, a) / 12.0;
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  const double den = n * sxx - sx * sx;
  f.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.max_residual = std::max(f.max_residual, std::fabs(y[i] - (f.slope * x[i] + f.intercept)));
  }
  return f;
}

// Remainder of -sum p ln p for p(x) = A/x^2 beyond x = a, Euler-Maclaurin.
double inverse_square_entropy_remainder(double A, double a) {
  const double la = std::log(a);
  const double lA = std::log(A);
  const double integral = A / a * (2.0 * la + 2.0 - lA);
  const double g = A / (a * a) * (2.0 * la - lA);
  const double dg = A / (a * a * a) * (2.0 - 2.0 * (2.0 * la - lA));
  return integral - 0.5 * g - dg / 12.0;
}

}  // namespace

double fat_tail_density(double nu, double n) {
  const double y = n + nu;
  const double ly = std::log(y);
  return 1.0 / (y * ly * ly);
}

double fat_tail_normalization(double nu, std::size_t explicit_terms) {
  check_nu(nu);
  CompensatedSum s;
  for (std::size_t n = 1; n <= explicit_terms; ++n) s.add(fat_tail_density(nu, static_cast<double>(n)));
  s.add(fat_tail_remainder(nu, static_cast<double>(explicit_terms)));
  return s.value();
}

FatTailWeights fat_weights(double nu, std::size_t cutoff) {
  check_nu(nu);
  if (cutoff < 10) throw PreconditionError("fat_weights: cutoff must be at least 10");
  const std::size_t ext = std::max(cutoff, kMinExplicitTerms);
  FatTailWeights w;
  w.nu = nu;
  w.cutoff = cutoff;
  w.p.resize(cutoff);
  CompensatedSum head;
  CompensatedSum tail;
  for (std::size_t n = 1; n <= ext; ++n) {
    const double f = fat_tail_density(nu, static_cast<double>(n));
    if (n <= cutoff) {
      w.p[n - 1] = f;
      head.add(f);
    } else {
      tail.add(f);
    }
  }
  const double rem = fat_tail_remainder(nu, static_cast<double>(ext));
  tail.add(rem);
  w.normalization = head.value() + tail.value();
  // Next Euler-Maclaurin term is f'''(a)/720 ~ 6/(720 a^4 ln^2 a).
  const double a = static_cast<double>(ext) + nu;
  w.normalization_error = 6.0 / (720.0 * a * a * a * a * std::log(a) * std::log(a)) +
                          1e-16 * static_cast<double>(ext) * w.normalization;
  const double inv = 1.0 / w.normalization;
  for (auto& p : w.p) p *= inv;
  w.tail_mass = tail.value() * inv;
  return w;
}

SpectralState fat_tail_state(const FatTailWeights& w, std::size_t N, const BasisDescriptor& basis) {
  if (N > w.cutoff) throw PreconditionError("fat_tail_state: N exceeds the weight cutoff");
  std::vector<Term> terms;
  terms.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) terms.push_back({n, std::sqrt(w.p[n - 1])});
  return SpectralState(basis, std::move(terms), false);
}

double von_neumann_entropy(const std::vector<double>& p) {
  CompensatedSum total;
  CompensatedSum s;
  for (double v : p) {
    if (v < 0.0 || !std::isfinite(v)) throw DomainError("von_neumann_entropy: negative probability");
    total.add(v);
    s.add(-xlogx(v));
  }
  if (total.value() > 1.0 + 1e-12) {
    throw PreconditionError("von_neumann_entropy: probabilities sum above 1");
  }
  return s.value();
}

double fat_tail_entropy(const FatTailWeights& w, std::size_t cutoff) {
  if (cutoff < 1 || cutoff > w.cutoff) {
    throw PreconditionError("fat_tail_entropy: cutoff outside the stored weights");
  }
  CompensatedSum s;
  CompensatedSum rest;
  for (std::size_t n = 1; n <= w.cutoff; ++n) {
    if (n <= cutoff) {
      s.add(-xlogx(w.p[n - 1]));
    } else {
      rest.add(w.p[n - 1]);
    }
  }
  rest.add(w.tail_mass);
  s.add(-xlogx(rest.value()));
  return s.value();
}

EntropyReport entropy_growth(double nu, const std::vector<std::size_t>& cutoffs) {
  if (cutoffs.size() < 4) throw PreconditionError("entropy_growth: need at least 4 cutoffs");
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (cutoffs[i] <= cutoffs[i - 1]) throw PreconditionError("entropy_growth: cutoffs must increase");
  }
  if (static_cast<double>(cutoffs.back()) < 1000.0 * static_cast<double>(cutoffs.front())) {
    throw PreconditionError("entropy_growth: cutoffs must span at least 3 decades");
  }
  const FatTailWeights w = fat_weights(nu, cutoffs.back());
  EntropyReport r;
  r.nu = nu;
  r.cutoffs = cutoffs;
  // Single pass: entropy of the resolved part accumulates in order.
  CompensatedSum head;
  CompensatedSum mass;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= w.cutoff && next < cutoffs.size(); ++n) {
    head.add(-xlogx(w.p[n - 1]));
    mass.add(w.p[n - 1]);
    if (n == cutoffs[next]) {
      const double rest = 1.0 - mass.value();
      r.entropy_at_cutoff.push_back(head.value() - xlogx(std::max(rest, 0.0)));
      ++next;
    }
  }
  std::vector<double> x;
  for (std::size_t c : cutoffs) x.push_back(std::log(std::log(static_cast<double>(c))));
  const LinearFit f = least_squares(x, r.entropy_at_cutoff);
  r.growth_model_fit = f.slope;
  r.fit_intercept = f.intercept;
  r.fit_max_residual = f.max_residual;
  return r;
}

EntropyEstimate inverse_square_entropy(std::size_t cutoff) {
  if (cutoff < 10) throw PreconditionError("inverse_square_entropy: cutoff must be at least 10");
  const double A = 6.0 / (kPi * kPi);
  CompensatedSum s;
  for (std::size_t n = 1; n <= cutoff; ++n) {
    const double nd = static_cast<double>(n);
    s.add(-xlogx(A / (nd * nd)));
  }
  const double a = static_cast<double>(cutoff);
  s.add(inverse_square_entropy_remainder(A, a));
  // Next Euler-Maclaurin term ~ g'''(a)/720 with g ~ 2A ln a / a^2.
  const double err = 24.0 * A * (2.0 * std::log(a) + 1.0) / (720.0 * a * a * a * a) + 1e-16 * a;
  return {s.value(), err};
}

EntropyEstimate sudden_split_entropy(double epsilon, std::size_t cutoff, Side side) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw PreconditionError("sudden_split_entropy: epsilon must lie in (0, 1)");
  }
  if (cutoff < 10) throw PreconditionError("sudden_split_entropy: cutoff must be at least 10");
  const bool left = side == Side::Left;
  const double norm = left ? norm_left_sq_closed(epsilon) : norm_right_sq_closed(epsilon);
  const double beta = left ? 1.0 - epsilon : epsilon;  // chamber width
  CompensatedSum s;
  CompensatedSum mass;
  for (std::size_t n = 1; n <= cutoff; ++n) {
    const double c = left ? coeff_a(n, epsilon) : coeff_b(n, epsilon);
    const double p = c * c / norm;
    mass.add(p);
    s.add(-xlogx(p));
  }
  // p_n = A n^2/(n^2 - b^2)^2 = A/n^2 (1 + 2 b^2/n^2 + ...).
  const double sn = specfun::sin_pi(epsilon);
  const double A = 4.0 * beta * sn * sn / (kPi * kPi * norm);
  const double a = static_cast<double>(cutoff);
  EntropyEstimate e;
  if (A > 0.0) s.add(inverse_square_entropy_remainder(A, a));
  e.value = s.value();
  const double la = std::abs(2.0 * std::log(a) - std::log(A)) + 2.0;
  e.error_bound = A * (2.0 * beta * beta * la / (a * a * a) + 24.0 * la / (720.0 * a * a * a * a)) +
                  1e-16 * a;
  return e;
}

std::string to_string(Spectrum s) {
  switch (s) {
    case Spectrum::SquareWell: return "square_well";
    case Spectrum::Oscillator: return "oscillator";
    case Spectrum::Coulomb: return "coulomb";
    case Spectrum::CoulombInverseN: return "coulomb_inverse_n";
  }
  return "?";
}

Spectrum spectrum_from_string(const std::string& s) {
  if (s == "square_well") return Spectrum::SquareWell;
  if (s == "oscillator") return Spectrum::Oscillator;
  if (s == "coulomb") return Spectrum::Coulomb;
  if (s == "coulomb_inverse_n") return Spectrum::CoulombInverseN;
  throw PreconditionError("unknown spectrum '" + s + "'");
}

double spectrum_energy(Spectrum s, std::size_t n) {
  const double nd = static_cast<double>(n);
  switch (s) {
    case Spectrum::SquareWell: return nd * nd;
    case Spectrum::Oscillator: return nd + 0.5;
    case Spectrum::Coulomb: return -1.0 / (nd * nd);
    case Spectrum::CoulombInverseN: return -1.0 / nd;
  }
  return 0.0;
}

double spectrum_size(Spectrum s, std::size_t n) {
  const double nd = static_cast<double>(n);
  switch (s) {
    case Spectrum::SquareWell: return 0.5;
    case Spectrum::Oscillator: return nd + 0.5;
    case Spectrum::Coulomb:
    case Spectrum::CoulombInverseN: return nd * nd;
  }
  return 0.0;
}

GrowthClass classify_growth(const std::vector<std::size_t>& cutoffs,
                            const std::vector<double>& partial_sums) {
  if (cutoffs.size() != partial_sums.size() || cutoffs.size() < 3) {
    throw PreconditionError("classify_growth: need at least 3 matching cutoffs and sums");
  }
  const std::size_t k = cutoffs.size() - 1;
  GrowthClass g;
  const double d_last = std::fabs(partial_sums[k] - partial_sums[k - 1]);
  const double d_prev = std::fabs(partial_sums[k - 1] - partial_sums[k - 2]);
  g.last_decade_increase = d_last;
  const double x_last = std::log(std::log(static_cast<double>(cutoffs[k])));
  const double x_prev = std::log(std::log(static_cast<double>(cutoffs[k - 1])));
  if (d_last > 0.0 && d_prev > 0.0) {
    g.decay_exponent = -(std::log(d_last) - std::log(d_prev)) / (x_last - x_prev);
  }
  if (d_last <= 100.0 * kPlateauThreshold) {
    g.divergent = false;
  } else {
    g.divergent = g.decay_exponent <= 1.5;
  }
  return g;
}

std::vector<std::size_t> decade_cutoffs(std::size_t first, std::size_t last) {
  std::vector<std::size_t> out;
  for (std::size_t c = first; c <= last; c *= 10) out.push_back(c);
  return out;
}

namespace {

std::vector<double> partial_sums_at(const FatTailWeights& w, const std::vector<std::size_t>& cutoffs,
                                    auto&& value) {
  std::vector<double> out;
  CompensatedSum s;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= w.cutoff && next < cutoffs.size(); ++n) {
    s.add(w.p[n - 1] * value(n));
    if (n == cutoffs[next]) {
      out.push_back(s.value());
      ++next;
    }
  }
  if (out.size() != cutoffs.size()) throw PreconditionError("cutoff exceeds the stored weights");
  return out;
}

std::vector<double> entropy_sums_at(const FatTailWeights& w, const std::vector<std::size_t>& cutoffs) {
  std::vector<double> out;
  CompensatedSum head;
  CompensatedSum mass;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= w.cutoff && next < cutoffs.size(); ++n) {
    head.add(-xlogx(w.p[n - 1]));
    mass.add(w.p[n - 1]);
    if (n == cutoffs[next]) {
      out.push_back(head.value() - xlogx(std::max(1.0 - mass.value(), 0.0)));
      ++next;
    }
  }
  if (out.size() != cutoffs.size()) throw PreconditionError("cutoff exceeds the stored weights");
  return out;
}

}  // namespace

ProbeReport energy_divergence(const FatTailWeights& w, Spectrum spectrum,
                              const std::vector<std::size_t>& cutoffs) {
  const auto energy = partial_sums_at(w, cutoffs, [&](std::size_t n) { return spectrum_energy(spectrum, n); });
  const auto size = partial_sums_at(w, cutoffs, [&](std::size_t n) { return spectrum_size(spectrum, n); });
  ProbeReport r;
  r.name = "energy_divergence_" + to_string(spectrum);
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    const std::string c = std::to_string(cutoffs[i]);
    r.scalars["energy_" + c] = energy[i];
    r.scalars["size_" + c] = size[i];
  }
  const GrowthClass ge = classify_growth(cutoffs, energy);
  const GrowthClass gs = classify_growth(cutoffs, size);
  r.scalars["energy_divergent"] = ge.divergent ? 1.0 : 0.0;
  r.scalars["energy_last_decade_increase"] = ge.last_decade_increase;
  r.scalars["energy_decay_exponent"] = ge.decay_exponent;
  r.scalars["size_divergent"] = gs.divergent ? 1.0 : 0.0;
  r.scalars["size_last_decade_increase"] = gs.last_decade_increase;
  r.scalars["size_decay_exponent"] = gs.decay_exponent;
  if (spectrum == Spectrum::Coulomb) {
    // Variant with E_n ~ -1/n reported alongside.
    const auto alt = partial_sums_at(w, cutoffs, [](std::size_t n) { return -1.0 / static_cast<double>(n); });
    const GrowthClass ga = classify_growth(cutoffs, alt);
    r.scalars["inverse_n_energy_divergent"] = ga.divergent ? 1.0 : 0.0;
    r.scalars["inverse_n_energy_last_decade_increase"] = ga.last_decade_increase;
    r.scalars["inverse_n_energy_" + std::to_string(cutoffs.back())] = alt.back();
  }
  return r;
}

ConjectureRow conjecture_check(const FatTailWeights& w, Spectrum spectrum,
                               const std::vector<std::size_t>& cutoffs) {
  const ProbeReport e = energy_divergence(w, spectrum, cutoffs);
  ConjectureRow row;
  row.spectrum = spectrum;
  row.entropy_divergent = classify_growth(cutoffs, entropy_sums_at(w, cutoffs)).divergent;
  row.energy_divergent = e.at("energy_divergent") != 0.0;
  row.size_divergent = e.at("size_divergent") != 0.0;
  return row;
}

double oscillator_fat_psi(const FatTailWeights& w, std::size_t n_max, double x) {
  if (n_max > w.cutoff) throw PreconditionError("oscillator_fat_psi: n_max exceeds the weight cutoff");
  const auto phi = specfun::hermite_fns(n_max, x);
  CompensatedSum s;
  for (std::size_t n = 1; n <= n_max; ++n) s.add(std::sqrt(w.p[n - 1]) * phi[n]);
  return s.value();
}

ProbeReport oscillator_asymptote(double nu, const std::vector<double>& x_samples, std::size_t n_max,
                                 const OscillatorOptions& opt) {
  if (x_samples.empty()) throw PreconditionError("oscillator_asymptote: no sample points");
  for (double x : x_samples) {
    if (!(x > 1.0)) throw PreconditionError("oscillator_asymptote: samples must exceed 1");
  }
  const FatTailWeights w = fat_weights(nu, std::max<std::size_t>(n_max, 10));
  ProbeReport r;
  r.name = "oscillator_asymptote";
  r.scalars["nu"] = nu;
  r.scalars["n_max"] = static_cast<double>(n_max);
  std::vector<double> cs;
  std::vector<double> cs_half;
  for (double x : x_samples) {
    const double psi = oscillator_fat_psi(w, n_max, x);
    cs.push_back(psi * std::sqrt(x) * std::log(x));
    cs_half.push_back(psi * std::sqrt(x) * std::log(0.5 * x * x));
  }
  auto mean = [](const std::vector<double>& v) {
    CompensatedSum s;
    for (double d : v) s.add(d);
    return s.value() / static_cast<double>(v.size());
  };
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  r.scalars["C"] = mean(cs);
  r.scalars["C_spread"] = *hi - *lo;
  r.scalars["C_first"] = cs.front();
  r.scalars["C_last"] = cs.back();
  // psi ~ sqrt(2/N_nu) / (sqrt(x) ln(x^2/2)) for large x.
  r.scalars["C_log_half_x_sq"] = mean(cs_half);
  r.scalars["C_log_half_x_sq_limit"] = std::sqrt(2.0 / w.normalization);
  if (opt.with_smoothness) {
    const double a = *std::min_element(x_samples.begin(), x_samples.end());
    const double b = *std::max_element(x_samples.begin(), x_samples.end());
    const double h = 0.05;
    double prev2 = oscillator_fat_psi(w, n_max, a);
    double prev1 = oscillator_fat_psi(w, n_max, a + h);
    double worst = 0.0;
    for (double x = a + 2.0 * h; x <= b + 1e-12; x += h) {
      const double cur = oscillator_fat_psi(w, n_max, x);
      worst = std::max(worst, std::fabs(cur - 2.0 * prev1 + prev2) / (h * h));
      prev2 = prev1;
      prev1 = cur;
    }
    r.scalars["max_second_derivative"] = worst;
  }
  if (opt.with_norms) {
    auto f = [&](double x) {
      const double v = oscillator_fat_psi(w, n_max, x);
      return v * v;
    };
    for (double X : {10.0, 20.0, 40.0}) {
      IntegrateOptions io{1e-9, 60, static_cast<int>(16 * X)};
      r.scalars["norm_within_" + std::to_string(static_cast<int>(X))] = integrate(f, -X, X, io);
    }
  }
  return r;
}

std::vector<std::vector<double>> weight_rows(const FatTailWeights& w) {
  std::vector<std::vector<double>> rows;
  rows.reserve(w.p.size());
  for (std::size_t n = 1; n <= w.p.size(); ++n) rows.push_back({static_cast<double>(n), w.p[n - 1]});
  return rows;
}

void to_json(nlohmann::json& j, const EntropyReport& r) {
  j = nlohmann::json{{"nu", r.nu},
                     {"cutoffs", r.cutoffs},
                     {"entropy_at_cutoff", r.entropy_at_cutoff},
                     {"growth_model_fit", r.growth_model_fit},
                     {"fit_intercept", r.fit_intercept},
                     {"fit_max_residual", r.fit_max_residual}};
}

}  // namespace qsplit
