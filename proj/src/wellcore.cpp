#include "qsplit/wellcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "qsplit/error.hpp"
#include "qsplit/specfun.hpp"
#include "qsplit/summation.hpp"

namespace qsplit {

WellUnits WellUnits::si(double length_m, double mass_kg) {
  if (!(length_m > 0.0) || !(mass_kg > 0.0)) {
    throw PreconditionError("WellUnits: length and mass must be positive");
  }
  return WellUnits{length_m, mass_kg, kHbarSI};
}

WellUnits WellUnits::electron_angstrom(double length_angstrom) {
  return si(length_angstrom * kAngstrom, kElectronMassSI);
}

double WellUnits::E0() const {
  return std::numbers::pi * std::numbers::pi * hbar * hbar / (2.0 * m * L * L);
}

double WellUnits::tau() const { return hbar / E0(); }

namespace {

void check_width(double w, const char* what) {
  if (!(w > 0.0 && w < 1.0)) {
    throw PreconditionError(std::string(what) + ": width must lie in (0, 1), got " +
                            std::to_string(w));
  }
}

}  // namespace

BasisDescriptor BasisDescriptor::full_well() { return {BasisKind::FullWell, 1.0, 0.0}; }

BasisDescriptor BasisDescriptor::sub_left(double w) {
  check_width(w, "sub_left");
  return {BasisKind::SubLeft, w, 0.0};
}

BasisDescriptor BasisDescriptor::sub_right(double w) {
  check_width(w, "sub_right");
  return {BasisKind::SubRight, w, 1.0 - w};
}

BasisDescriptor BasisDescriptor::oscillator() { return {BasisKind::Oscillator, 0.0, 0.0}; }

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::FullWell: return "FullWell";
    case BasisKind::SubLeft: return "SubLeft";
    case BasisKind::SubRight: return "SubRight";
    case BasisKind::Oscillator: return "Oscillator";
  }
  return "?";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "FullWell") return BasisKind::FullWell;
  if (s == "SubLeft") return BasisKind::SubLeft;
  if (s == "SubRight") return BasisKind::SubRight;
  if (s == "Oscillator") return BasisKind::Oscillator;
  throw PreconditionError("unknown basis kind '" + s + "'");
}

namespace {

double sum_abs_sq(const std::vector<Term>& terms) {
  CompensatedSum s;
  for (const auto& t : terms) s.add(std::norm(t.c));
  return s.value();
}

}  // namespace

SpectralState::SpectralState(BasisDescriptor basis, std::vector<Term> terms, bool normalized)
    : basis_(basis), terms_(std::move(terms)), normalized_(normalized) {
  const std::size_t lowest = basis_.min_index();
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].n < lowest) {
      throw PreconditionError("SpectralState: index " + std::to_string(terms_[i].n) +
                              " below basis minimum");
    }
    if (i > 0 && terms_[i].n <= terms_[i - 1].n) {
      throw PreconditionError("SpectralState: indices must be strictly increasing");
    }
    if (!std::isfinite(terms_[i].c.real()) || !std::isfinite(terms_[i].c.imag())) {
      throw PreconditionError("SpectralState: non-finite coefficient");
    }
  }
  const double s = sum_abs_sq(terms_);
  if (normalized_ && std::fabs(s - 1.0) > kNormTolerance) {
    throw PreconditionError("SpectralState: flagged normalized but sum |c|^2 = " +
                            std::to_string(s));
  }
  if (!normalized_ && s > 1.0 + kNormTolerance) {
    throw PreconditionError("SpectralState: sum |c|^2 exceeds 1");
  }
}

SpectralState SpectralState::normalized_copy(BasisDescriptor basis, std::vector<Term> terms) {
  const double s = sum_abs_sq(terms);
  if (!(s > 0.0)) throw PreconditionError("SpectralState: cannot normalize a zero state");
  const double inv = 1.0 / std::sqrt(s);
  for (auto& t : terms) t.c *= inv;
  return SpectralState(basis, std::move(terms), true);
}

double SpectralState::norm_sq() const { return sum_abs_sq(terms_); }

SpectralState SpectralState::truncated(std::size_t m, bool renormalize) const {
  std::vector<Term> kept(terms_.begin(), terms_.begin() + static_cast<std::ptrdiff_t>(
                                                              std::min(m, terms_.size())));
  if (renormalize) return normalized_copy(basis_, std::move(kept));
  return SpectralState(basis_, std::move(kept), false);
}

void GridFunction::validate() const {
  if (!(lo < hi)) throw PreconditionError("GridFunction: lo must be below hi");
  if (samples.size() < 2) throw PreconditionError("GridFunction: need at least 2 samples");
}

double GridFunction::spacing() const {
  return (hi - lo) / static_cast<double>(samples.size() - 1);
}

double GridFunction::xi(std::size_t i) const {
  const std::size_t last = samples.size() - 1;
  if (i == last) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(last));
}

double eigenfunction(const BasisDescriptor& basis, std::size_t n, double xi) {
  if (basis.kind == BasisKind::Oscillator) return specfun::hermite_fn(n, xi);
  if (xi < basis.lo() || xi > basis.hi()) return 0.0;
  const double local = basis.kind == BasisKind::SubRight ? xi - basis.offset : xi;
  const double w = basis.width;
  return std::sqrt(2.0 / w) * specfun::sin_pi(static_cast<double>(n) * (local / w));
}

double eigenenergy(const BasisDescriptor& basis, std::size_t n) {
  const double nd = static_cast<double>(n);
  switch (basis.kind) {
    case BasisKind::FullWell: return nd * nd;
    case BasisKind::SubLeft:
    case BasisKind::SubRight: return nd * nd / (basis.width * basis.width);
    case BasisKind::Oscillator: return nd + 0.5;
  }
  return 0.0;
}

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  double total_width;

  double step(double a, double b, double fa, double fm, double fb, double whole, double tol,
              int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double both = left + right;
    const double diff = both - whole;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         (std::fabs(left) + std::fabs(right));
    if (std::fabs(diff) <= 15.0 * tol || std::fabs(diff) <= floor) {
      return both + diff / 15.0;
    }
    if (depth >= max_depth) {
      throw ConvergenceError("integrate: subdivision depth limit reached near x = " +
                             std::to_string(m));
    }
    return step(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           step(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  return integrate(f, a, b, IntegrateOptions{tol, 60, 8});
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const IntegrateOptions& opt) {
  if (!(a < b)) throw PreconditionError("integrate: need a < b");
  if (!(opt.tol > 0.0)) throw PreconditionError("integrate: tolerance must be positive");
  const int panels = std::max(1, opt.initial_panels);
  Simpson s{f, opt.max_depth, b - a};
  CompensatedSum total;
  const double h = (b - a) / panels;
  double x0 = a;
  double f0 = f(a);
  for (int i = 0; i < panels; ++i) {
    const double x1 = (i + 1 == panels) ? b : a + h * (i + 1);
    const double xm = 0.5 * (x0 + x1);
    const double fm = f(xm);
    const double f1 = f(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total.add(s.step(x0, x1, f0, fm, f1, whole, opt.tol * (x1 - x0) / (b - a), 0));
    x0 = x1;
    f0 = f1;
  }
  return total.value();
}

double state_energy(const SpectralState& state) {
  CompensatedSum e;
  for (const auto& t : state.terms()) e.add(std::norm(t.c) * eigenenergy(state.basis(), t.n));
  return e.value();
}

void to_json(nlohmann::json& j, const BasisDescriptor& b) {
  j = nlohmann::json{{"kind", to_string(b.kind)}, {"width", b.width}, {"offset", b.offset}};
}

void from_json(const nlohmann::json& j, BasisDescriptor& b) {
  const BasisKind kind = basis_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case BasisKind::FullWell: b = BasisDescriptor::full_well(); break;
    case BasisKind::SubLeft: b = BasisDescriptor::sub_left(j.at("width").get<double>()); break;
    case BasisKind::SubRight: b = BasisDescriptor::sub_right(j.at("width").get<double>()); break;
    case BasisKind::Oscillator: b = BasisDescriptor::oscillator(); break;
  }
}

void to_json(nlohmann::json& j, const SpectralState& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : s.terms()) {
    terms.push_back({{"n", t.n}, {"re", t.c.real()}, {"im", t.c.imag()}});
  }
  j = nlohmann::json{{"basis", s.basis()}, {"terms", std::move(terms)},
                     {"normalized", s.normalized()}};
}

SpectralState spectral_state_from_json(const nlohmann::json& j) {
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) {
    terms.push_back({t.at("n").get<std::size_t>(),
                     {t.at("re").get<double>(), t.value("im", 0.0)}});
  }
  return SpectralState(j.at("basis").get<BasisDescriptor>(), std::move(terms),
                       j.at("normalized").get<bool>());
}

void to_json(nlohmann::json& j, const GridFunction& g) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& z : g.samples) samples.push_back({z.real(), z.imag()});
  j = nlohmann::json{{"lo", g.lo}, {"hi", g.hi}, {"samples", std::move(samples)},
                     {"time", g.time}};
}

void from_json(const nlohmann::json& j, GridFunction& g) {
  g.lo = j.at("lo").get<double>();
  g.hi = j.at("hi").get<double>();
  g.time = j.at("time").get<double>();
  g.samples.clear();
  for (const auto& z : j.at("samples")) g.samples.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  g.validate();
}

}  // namespace qsplit
