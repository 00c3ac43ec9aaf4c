#include "qsplit/daemon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qsplit/error.hpp"
#include "qsplit/specfun.hpp"
#include "qsplit/splitter.hpp"
#include "qsplit/wellcore.hpp"

namespace qsplit {
namespace {

constexpr double kPi = std::numbers::pi;

void check_open(double eps, const char* what) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PreconditionError(std::string(what) + ": epsilon must lie in (0, 1), got " +
                            std::to_string(eps));
  }
}

void check_lower_half(double eps, const char* what, bool include_half) {
  const bool ok = eps > 0.0 && (include_half ? eps <= 0.5 : eps < 0.5);
  if (!ok) {
    throw PreconditionError(std::string(what) + ": epsilon must lie in (0, 1/2" +
                            (include_half ? "]" : ")") + ", got " + std::to_string(eps));
  }
}

}  // namespace

double adiabatic_delta_e_closed(double epsilon) {
  check_open(epsilon, "adiabatic_delta_e");
  const double e = epsilon;
  const double b = 1.0 - e;
  const double sc = specfun::sin_pi(e) * specfun::cos_pi(e);
  return 1.0 / e + 1.0 / b + (2.0 * e - 1.0) / (kPi * e * e * b * b) * sc - 1.0;
}

double adiabatic_delta_e_series(double epsilon) {
  return 2.0 * epsilon + (2.0 / 3.0) * kPi * kPi * epsilon + 3.0 * epsilon * epsilon;
}

AdiabaticReport adiabatic_delta_e(double epsilon) {
  check_open(epsilon, "adiabatic_delta_e");
  AdiabaticReport r;
  r.epsilon = epsilon;
  r.delta_e_exact = adiabatic_delta_e_closed(epsilon);
  r.delta_e_series = adiabatic_delta_e_series(epsilon);
  r.left_ground = 1.0 / ((1.0 - epsilon) * (1.0 - epsilon));
  r.right_ground = 1.0 / (epsilon * epsilon);
  const auto phi1_sq = [](double x) {
    const double s = specfun::sin_pi(x);
    return 2.0 * s * s;
  };
  const double b = 1.0 - epsilon;
  const double wl = integrate(phi1_sq, 0.0, b, 1e-14);
  const double wr = integrate(phi1_sq, b, 1.0, 1e-14 * epsilon);
  r.delta_e_quadrature = wl * r.left_ground + wr * r.right_ground - 1.0;
  r.luders_excess = luders_excess(epsilon);
  return r;
}

double insertion_inequality_margin(double epsilon) {
  check_open(epsilon, "insertion_inequality_margin");
  const double p = trap_probability(epsilon);
  const double b = 1.0 - epsilon;
  return p * (1.0 / (epsilon * epsilon) - 1.0 / (b * b));
}

double luders_excess(double epsilon) {
  check_open(epsilon, "luders_excess");
  return insertion_inequality_margin(std::min(epsilon, 1.0 - epsilon));
}

double bisect_luders_zero(double lo, double hi, double tol) {
  double flo = insertion_inequality_margin(lo);
  const double fhi = insertion_inequality_margin(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw PreconditionError("bisect_luders_zero: interval does not bracket a sign change");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = insertion_inequality_margin(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double energy_left_undisturbed(double epsilon) {
  check_lower_half(epsilon, "energy_left_undisturbed", false);
  const double b = 1.0 - epsilon;
  return (1.0 - trap_probability(epsilon)) / (b * b);
}

double energy_left_disturbed(double epsilon) {
  check_lower_half(epsilon, "energy_left_disturbed", false);
  return (1.0 - trap_probability(epsilon)) * (1.0 + adiabatic_delta_e_closed(epsilon));
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p must lie in [0, 1]");
  double s = 0.0;
  if (p > 0.0) s -= p * std::log(p);
  if (p < 1.0) s -= (1.0 - p) * std::log1p(-p);
  return s;
}

double erasure_entropy_asymptotic(double epsilon) {
  const double c = (2.0 / 3.0) * kPi * kPi;
  return (c * (1.0 - std::log(c)) - 2.0 * kPi * kPi * std::log(epsilon)) * epsilon * epsilon *
         epsilon;
}

DaemonLedger daemon_ledger(double epsilon, double kT) {
  check_lower_half(epsilon, "daemon_ledger", true);
  DaemonLedger l;
  l.epsilon = epsilon;
  l.kT = kT;
  l.trap_p = trap_probability(epsilon);
  l.erasure_entropy_exact = binary_entropy(l.trap_p);
  l.erasure_entropy_asymptotic = erasure_entropy_asymptotic(epsilon);
  l.insertion_work = adiabatic_delta_e_closed(epsilon);
  // Collapsed chamber holds 1 + dE; the expansion ends in the full-well ground state.
  l.extracted_energy = (1.0 + l.insertion_work) - 1.0;
  l.second_law_margin = l.insertion_work + kT * l.erasure_entropy_exact - l.extracted_energy;
  l.landauer_only_margin = kT * l.erasure_entropy_exact - l.extracted_energy;
  return l;
}

std::vector<double> epsilon_grid(double lo, double hi, std::size_t count) {
  if (count < 1) throw PreconditionError("epsilon grid needs at least one point");
  if (count == 1) return {lo};
  if (!(lo < hi)) throw PreconditionError("epsilon grid needs lo < hi");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = (i + 1 == count) ? hi
                              : lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

std::vector<std::vector<double>> ledger_rows(const std::vector<DaemonLedger>& rows) {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& l : rows) {
    out.push_back({l.epsilon, l.trap_p, l.erasure_entropy_exact, l.erasure_entropy_asymptotic,
                   l.insertion_work, l.extracted_energy, l.second_law_margin});
  }
  return out;
}

std::vector<std::vector<double>> adiabatic_rows(const std::vector<AdiabaticReport>& rows) {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back({r.epsilon, r.delta_e_exact, r.delta_e_quadrature, r.delta_e_series, r.left_ground,
                   r.right_ground, r.luders_excess});
  }
  return out;
}

void to_json(nlohmann::json& j, const AdiabaticReport& r) {
  j = nlohmann::json{{"epsilon", r.epsilon},
                     {"delta_e_exact", r.delta_e_exact},
                     {"delta_e_quadrature", r.delta_e_quadrature},
                     {"delta_e_series", r.delta_e_series},
                     {"left_ground", r.left_ground},
                     {"right_ground", r.right_ground},
                     {"luders_excess", r.luders_excess}};
}

void to_json(nlohmann::json& j, const DaemonLedger& l) {
  j = nlohmann::json{{"epsilon", l.epsilon},
                     {"trap_p", l.trap_p},
                     {"erasure_entropy_exact", l.erasure_entropy_exact},
                     {"erasure_entropy_asymptotic", l.erasure_entropy_asymptotic},
                     {"extracted_energy", l.extracted_energy},
                     {"insertion_work", l.insertion_work},
                     {"kT", l.kT},
                     {"second_law_margin", l.second_law_margin},
                     {"landauer_only_margin", l.landauer_only_margin}};
}

}  // namespace qsplit
