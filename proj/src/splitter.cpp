#include "qsplit/splitter.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "qsplit/error.hpp"
#include "qsplit/specfun.hpp"
#include "qsplit/summation.hpp"

namespace qsplit {
namespace {

constexpr double kPi = std::numbers::pi;

void check_epsilon(double eps, const char* what) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PreconditionError(std::string(what) + ": epsilon must lie in (0, 1), got " +
                            std::to_string(eps));
  }
}

bool near_integer(double v) { return std::fabs(v - std::round(v)) <= kFixedNodeTolerance; }

}  // namespace

SplitSpec SplitSpec::make(double epsilon) {
  check_epsilon(epsilon, "SplitSpec");
  return SplitSpec{epsilon};
}

bool is_fixed_node(const SpectralState& state, double x0) {
  if (state.basis().kind != BasisKind::FullWell) {
    throw PreconditionError("is_fixed_node: state must be on the full-well basis");
  }
  if (!(x0 > 0.0 && x0 < 1.0)) throw PreconditionError("is_fixed_node: x0 must lie in (0, 1)");
  bool any = false;
  for (const auto& t : state.terms()) {
    if (t.c == 0.0) continue;
    any = true;
    if (!near_integer(static_cast<double>(t.n) * x0)) return false;
  }
  return any;
}

SplitResult decompose_fixed(const SpectralState& state, double x0) {
  if (!is_fixed_node(state, x0)) {
    throw PreconditionError("decompose_fixed: x0 = " + std::to_string(x0) +
                            " is not a fixed node of the state");
  }
  const double wl = x0;
  const double wr = 1.0 - x0;
  std::vector<Term> left;
  std::vector<Term> right;
  for (const auto& t : state.terms()) {
    if (t.c == 0.0) continue;
    const auto nd = static_cast<double>(t.n);
    const auto m_left = static_cast<std::size_t>(std::llround(nd * x0));
    const std::size_t m_right = t.n - m_left;
    // sin(n pi x) = (-1)^{n x0} sin(n pi (x - x0)) on the right chamber.
    const double sign = (m_left % 2 == 0) ? 1.0 : -1.0;
    left.push_back({m_left, t.c * std::sqrt(wl)});
    right.push_back({m_right, t.c * (sign * std::sqrt(wr))});
  }
  SplitResult r;
  r.left = SpectralState(BasisDescriptor::sub_left(wl), std::move(left), false);
  r.right = SpectralState(BasisDescriptor::sub_right(wr), std::move(right), false);
  r.norm_left_sq = r.left.norm_sq();
  r.norm_right_sq = r.right.norm_sq();
  r.energy_left = state_energy(r.left);
  r.energy_right = state_energy(r.right);
  r.truncation = state.size();
  r.tail_bound = 1e-12;
  return r;
}

MeasurementOutcome collapse(const SplitResult& split, Side measured_side, Outcome outcome) {
  if (std::fabs(split.norm_left_sq + split.norm_right_sq - 1.0) > split.tail_bound + 1e-12) {
    throw PreconditionError("collapse: branch norms do not sum to one");
  }
  const bool left_branch = (measured_side == Side::Left) == (outcome == Outcome::Present);
  const SpectralState& branch = left_branch ? split.left : split.right;
  const double prob = left_branch ? split.norm_left_sq : split.norm_right_sq;
  const double energy = left_branch ? split.energy_left : split.energy_right;
  if (prob < 1e-14) {
    throw ImpossibleOutcome("collapse: branch probability " + std::to_string(prob) +
                            " is below 1e-14");
  }
  MeasurementOutcome m;
  m.particle_found_left = left_branch;
  m.probability = prob;
  m.post_state = SpectralState::normalized_copy(branch.basis(), branch.terms());
  m.post_energy = energy / prob;
  return m;
}

double coeff_a(std::size_t n, double epsilon) {
  check_epsilon(epsilon, "coeff_a");
  const double nd = static_cast<double>(n);
  const double beta = 1.0 - epsilon;
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  return 2.0 * nd * sign * std::sqrt(beta) * specfun::sin_pi(epsilon) /
         (kPi * (nd + beta) * (nd - beta));
}

double coeff_b(std::size_t n, double epsilon) {
  check_epsilon(epsilon, "coeff_b");
  const double nd = static_cast<double>(n);
  return 2.0 * nd * std::sqrt(epsilon) * specfun::sin_pi(epsilon) /
         (kPi * (nd + epsilon) * (nd - epsilon));
}

double trap_probability(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw PreconditionError("trap_probability: epsilon must lie in [0, 1]");
  }
  if (epsilon > 0.25) return epsilon - std::sin(2.0 * kPi * epsilon) / (2.0 * kPi);
  // eps - sin(2 pi eps)/(2 pi) = sum_k (-1)^{k+1} (2 pi)^{2k} eps^{2k+1} / (2k+1)!
  const double z = 2.0 * kPi * epsilon;
  double term = epsilon * z * z / 6.0;
  CompensatedSum s;
  for (int k = 1; k < 40 && term != 0.0; ++k) {
    s.add(term);
    term *= -z * z / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    if (std::fabs(term) < 1e-18 * std::fabs(s.value())) break;
  }
  return s.value();
}

double trap_probability_series(double epsilon) {
  const double e3 = epsilon * epsilon * epsilon;
  const double pi2 = kPi * kPi;
  return (2.0 / 3.0) * pi2 * e3 - (2.0 / 15.0) * pi2 * pi2 * e3 * epsilon * epsilon;
}

double norm_left_sq_closed(double epsilon) {
  check_epsilon(epsilon, "norm_left_sq_closed");
  return specfun::sin_pi(epsilon) * specfun::cos_pi(epsilon) / kPi + (1.0 - epsilon);
}

double norm_right_sq_closed(double epsilon) {
  check_epsilon(epsilon, "norm_right_sq_closed");
  return norm_left_sq_closed(1.0 - epsilon);
}

double norm_left_sq_spectral(double epsilon) {
  check_epsilon(epsilon, "norm_left_sq_spectral");
  const double beta = 1.0 - epsilon;
  const double s = specfun::sin_pi(epsilon);
  const double bracket = specfun::trigamma(epsilon).value + specfun::trigamma(2.0 - epsilon).value +
                         (specfun::digamma(2.0 - epsilon).value - specfun::digamma(epsilon).value) /
                             beta;
  return beta * s * s / (kPi * kPi) * bracket;
}

PartialSum norm_left_sq_partial(double epsilon, std::size_t N) {
  check_epsilon(epsilon, "norm_left_sq_partial");
  if (N < 1) throw PreconditionError("norm_left_sq_partial: N must be at least 1");
  const double beta = 1.0 - epsilon;
  const double s = specfun::sin_pi(epsilon);
  const double pref = 4.0 / (kPi * kPi) * beta * s * s;
  CompensatedSum acc;
  for (std::size_t n = 1; n <= N; ++n) {
    const double nd = static_cast<double>(n);
    const double d = (nd - beta) * (nd + beta);
    acc.add(nd * nd / (d * d));
  }
  // n^2/(n^2-b^2)^2 = 1/n^2 + 2 b^2/n^4 + ...; integrate from N + 1/2.
  const double h = static_cast<double>(N) + 0.5;
  const double tail = 1.0 / h + 2.0 * beta * beta / (3.0 * h * h * h);
  return PartialSum{pref * acc.value(), pref * tail, N};
}

double renormalized_energy_left(double epsilon) { return norm_left_sq_spectral(epsilon); }

double renormalized_energy_right(double epsilon) {
  check_epsilon(epsilon, "renormalized_energy_right");
  return norm_left_sq_spectral(1.0 - epsilon);
}

PartialSum renormalized_energy_left_constructive(double epsilon, std::size_t N) {
  check_epsilon(epsilon, "renormalized_energy_left_constructive");
  if (N < 2) throw PreconditionError("renormalized_energy_left_constructive: N must be >= 2");
  const double beta = 1.0 - epsilon;  // also the chamber width in units of L
  const double w = beta;
  const double alpha = 2.0 * std::numbers::sqrt2 / kPi * specfun::sin_pi(epsilon);
  // Remainder R = psi - (alpha pi / 2w) x has chi-coefficients
  // alpha beta^2 (-1)^{n+1} / (n (n^2 - beta^2)) sqrt(w/2); its kinetic
  // energy is alpha^2 beta^4 / (2w) sum 1/(n^2 - beta^2)^2.
  CompensatedSum acc;
  for (std::size_t n = 1; n <= N; ++n) {
    const double nd = static_cast<double>(n);
    const double d = (nd - beta) * (nd + beta);
    acc.add(1.0 / (d * d));
  }
  const double pref = alpha * alpha * beta * beta * beta * beta / (2.0 * w);
  // <c x, -R''> integrated by parts leaves -c w R'(w).
  const double boundary = 0.5 * alpha *
                          (std::numbers::sqrt2 * specfun::cos_pi(epsilon) + alpha / (2.0 * beta));
  const double nm1 = static_cast<double>(N) - 1.0;
  const double tail = pref / (3.0 * nm1 * nm1 * nm1);
  return PartialSum{pref * acc.value() + boundary, tail, N};
}

double naive_energy_partial(double epsilon, std::size_t N) {
  check_epsilon(epsilon, "naive_energy_partial");
  const double beta = 1.0 - epsilon;
  CompensatedSum acc;
  for (std::size_t n = 1; n <= N; ++n) {
    const double a = coeff_a(n, epsilon);
    const double nd = static_cast<double>(n);
    acc.add(a * a * nd * nd);
  }
  return acc.value() / (beta * beta);
}

SplitResult sudden_split(const SplitSpec& spec, std::size_t N) {
  const double eps = spec.epsilon;
  check_epsilon(eps, "sudden_split");
  if (N < 1) throw PreconditionError("sudden_split: N must be at least 1");
  std::vector<Term> left;
  std::vector<Term> right;
  left.reserve(N);
  right.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    left.push_back({n, coeff_a(n, eps)});
    right.push_back({n, coeff_b(n, eps)});
  }
  SplitResult r;
  r.left = SpectralState(BasisDescriptor::sub_left(1.0 - eps), std::move(left), false);
  r.right = SpectralState(BasisDescriptor::sub_right(eps), std::move(right), false);
  r.norm_left_sq = norm_left_sq_closed(eps);
  r.norm_right_sq = norm_right_sq_closed(eps);
  r.energy_left = renormalized_energy_left(eps);
  r.energy_right = renormalized_energy_right(eps);
  r.truncation = N;
  // Discarded weight of both chambers: a_n^2 + b_n^2 <= 4 sin^2(pi eps) / (pi^2 (n-1)^2).
  const double s = specfun::sin_pi(eps);
  const double nd = static_cast<double>(N);
  r.tail_bound = 4.0 * s * s / (kPi * kPi) * (1.0 / nd + 1.0 / (nd * nd));
  return r;
}

std::vector<std::vector<double>> coefficient_rows(double epsilon, std::size_t N) {
  std::vector<std::vector<double>> rows;
  rows.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    rows.push_back({static_cast<double>(n), coeff_a(n, epsilon), coeff_b(n, epsilon)});
  }
  return rows;
}

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }
std::string to_string(Outcome o) { return o == Outcome::Present ? "present" : "absent"; }

void to_json(nlohmann::json& j, const SplitResult& r) {
  j = nlohmann::json{{"left", r.left},
                     {"right", r.right},
                     {"norm_left_sq", r.norm_left_sq},
                     {"norm_right_sq", r.norm_right_sq},
                     {"energy_left", r.energy_left},
                     {"energy_right", r.energy_right},
                     {"truncation", r.truncation},
                     {"tail_bound", r.tail_bound}};
}

void to_json(nlohmann::json& j, const MeasurementOutcome& m) {
  j = nlohmann::json{{"particle_found_left", m.particle_found_left},
                     {"probability", m.probability},
                     {"post_state", m.post_state},
                     {"post_energy", m.post_energy}};
}

}  // namespace qsplit
