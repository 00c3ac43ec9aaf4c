#include "qsplit/identities.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unistd.h>

#include "qsplit/cli.hpp"
#include "qsplit/daemon.hpp"
#include "qsplit/evolve.hpp"
#include "qsplit/fatstate.hpp"
#include "qsplit/specfun.hpp"
#include "qsplit/splitter.hpp"
#include "qsplit/wellcore.hpp"

namespace qsplit {
namespace {

using specfun::digamma;
using specfun::trigamma;
constexpr double kPi = std::numbers::pi;

IdentityCheck make(std::string module, std::string name, double observed, double tol,
                   std::string detail = {}) {
  return {std::move(module), std::move(name), observed <= tol, observed, tol, std::move(detail)};
}

IdentityCheck make_flag(std::string module, std::string name, bool ok, std::string detail = {}) {
  return {std::move(module), std::move(name), ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)};
}

std::vector<double> uniform_eps(std::size_t count) {
  std::vector<double> e(count);
  for (std::size_t i = 0; i < count; ++i) e[i] = static_cast<double>(i + 1) / static_cast<double>(count + 1);
  return e;
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void specfun_checks(std::vector<IdentityCheck>& out) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(1e-3, 50.0);
  double r0 = 0.0;
  double r1 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double u = dist(rng);
    r0 = std::max(r0, std::fabs(digamma(u + 1).value - digamma(u).value - 1.0 / u));
    r1 = std::max(r1, std::fabs(trigamma(u + 1).value - trigamma(u).value + 1.0 / (u * u)));
  }
  out.push_back(make("specfun", "digamma recurrence residual (1000 random u)", r0, 1e-12));
  out.push_back(make("specfun", "trigamma recurrence residual (1000 random u)", r1, 1e-12));

  bool mono = true;
  double prev = trigamma(0.01).value;
  for (double u = 0.02; u < 100.0; u += 0.01) {
    const double v = trigamma(u).value;
    mono = mono && v > 0.0 && v < prev;
    prev = v;
  }
  out.push_back(make_flag("specfun", "trigamma positive and decreasing on (0, 100)", mono));

  double worst = 0.0;
  for (std::size_t m = 0; m <= 20; ++m) {
    for (std::size_t n = m; n <= 20; ++n) {
      if ((m + n) % 2 == 1) continue;  // odd integrand
      auto f = [m, n](double x) { return specfun::hermite_fn(m, x) * specfun::hermite_fn(n, x); };
      const double v = integrate(f, -12.0, 12.0, IntegrateOptions{1e-11, 60, 64});
      worst = std::max(worst, std::fabs(v - (m == n ? 1.0 : 0.0)));
    }
  }
  out.push_back(make("specfun", "Hermite orthonormality m, n <= 20", worst, 1e-8));
}

void wellcore_checks(std::vector<IdentityCheck>& out) {
  double worst = 0.0;
  for (double w : {0.3, 2.0 / 3.0, 0.9}) {
    for (auto basis : {BasisDescriptor::sub_left(w), BasisDescriptor::sub_right(w)}) {
      for (std::size_t m = 1; m <= 10; ++m) {
        for (std::size_t n = m; n <= 10; ++n) {
          auto f = [&](double x) { return eigenfunction(basis, m, x) * eigenfunction(basis, n, x); };
          const double v = integrate(f, basis.lo(), basis.hi(), IntegrateOptions{1e-13, 60, 32});
          worst = std::max(worst, std::fabs(v - (m == n ? 1.0 : 0.0)));
        }
      }
    }
  }
  out.push_back(make("wellcore", "subchamber basis orthonormality m, n <= 10", worst, 1e-10));

  const double r3 = 1.0 / std::sqrt(3.0);
  const double r6 = 1.0 / std::sqrt(6.0);
  const SpectralState left(BasisDescriptor::sub_left(2.0 / 3.0), {{2, r3}, {4, r3}}, false);
  const SpectralState right(BasisDescriptor::sub_right(1.0 / 3.0), {{1, r6}, {2, r6}}, false);
  out.push_back(make("wellcore", "split energies add to 45/2",
                     std::fabs(state_energy(left) + state_energy(right) - 22.5), 1e-12));

  double edge = 0.0;
  for (auto basis : {BasisDescriptor::full_well(), BasisDescriptor::sub_left(0.9),
                     BasisDescriptor::sub_right(0.1), BasisDescriptor::sub_left(2.0 / 3.0),
                     BasisDescriptor::sub_right(1.0 / 3.0)}) {
    for (std::size_t n = 1; n <= 100; ++n) {
      edge = std::max({edge, std::fabs(eigenfunction(basis, n, basis.lo())),
                       std::fabs(eigenfunction(basis, n, basis.hi()))});
    }
  }
  out.push_back(make("wellcore", "eigenfunctions vanish at support endpoints", edge, 1e-12));
}

void splitter_checks(std::vector<IdentityCheck>& out) {
  const auto eps = uniform_eps(999);
  double cons = 0.0;
  double norm = 0.0;
  double mirror = 0.0;
  double complement = 0.0;
  for (double e : eps) {
    cons = std::max(cons, std::fabs(renormalized_energy_left(e) + renormalized_energy_right(e) - 1.0));
    norm = std::max(norm, std::fabs(norm_left_sq_closed(e) - norm_left_sq_spectral(e)));
    complement = std::max(complement, std::fabs(norm_left_sq_closed(e) - (1.0 - trap_probability(e))));
    for (std::size_t n : {1u, 2u, 7u, 50u}) {
      mirror = std::max(mirror, std::fabs(coeff_b(n, e) - ((n % 2) ? 1.0 : -1.0) * coeff_a(n, 1.0 - e)));
    }
    mirror = std::max(mirror, std::fabs(renormalized_energy_right(e) - renormalized_energy_left(1.0 - e)));
    mirror = std::max(mirror, std::fabs(norm_right_sq_closed(e) - norm_left_sq_closed(1.0 - e)));
  }
  out.push_back(make("splitter", "energy conservation E_left + E_right = 1 (999 eps)", cons, 1e-10));
  out.push_back(make("splitter", "closed and polygamma norm forms agree (999 eps)", norm, 1e-12));
  out.push_back(make("splitter", "mirror symmetry eps <-> 1 - eps", mirror, 1e-12));
  out.push_back(make("splitter", "left norm equals 1 - trap probability", complement, 1e-12));

  const double r2 = 1.0 / std::sqrt(2.0);
  const SpectralState s(BasisDescriptor::full_well(), {{3, r2}, {6, r2}}, true);
  const SplitResult split = decompose_fixed(s, 2.0 / 3.0);
  double recon = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = i / 10000.0;
    double full = 0.0;
    for (const auto& t : s.terms()) full += t.c.real() * eigenfunction(s.basis(), t.n, x);
    double parts = 0.0;
    for (const auto& t : split.left.terms()) parts += t.c.real() * eigenfunction(split.left.basis(), t.n, x);
    if (x > split.left.basis().hi()) {
      for (const auto& t : split.right.terms()) parts += t.c.real() * eigenfunction(split.right.basis(), t.n, x);
    }
    recon = std::max(recon, std::fabs(full - parts));
  }
  out.push_back(make("splitter", "fixed-node split reconstructs the state (1e4 points)", recon, 1e-12));

  double post = 0.0;
  for (double e : uniform_eps(99)) {
    const SplitResult sr = sudden_split(SplitSpec::make(e), 8);
    post = std::max(post, std::fabs(collapse(sr, Side::Right, Outcome::Absent).post_energy - 1.0));
  }
  out.push_back(make("splitter", "post-collapse left energy is 1 E0 (99 eps)", post, 1e-10));
}

void evolve_checks(std::vector<IdentityCheck>& out, std::size_t threads) {
  const SplitResult sr = sudden_split(SplitSpec::make(0.1), 2000);
  const SpectralState ev = evolve_phase(sr.left, 0.37);
  out.push_back(make("evolve", "unitarity of phase evolution",
                     std::fabs(ev.norm_sq() - sr.left.norm_sq()), 1e-15));

  double bc = 0.0;
  for (double t : {1e-3, 0.1, 0.57, 3.0}) {
    for (std::size_t N : {10u, 500u, 2000u}) {
      EvolutionSpec es{sr.left, t, N, {0.0, 0.9, 2}};
      const GridFunction g = sample_grid(es, 1);
      bc = std::max({bc, std::abs(g.samples.front()), std::abs(g.samples.back())});
    }
  }
  out.push_back(make("evolve", "boundary values vanish for t > 0", bc, 1e-10));

  EvolutionSpec es{sr.left, 0.57, 2000, {0.5, 0.9, 3001}};
  const GridFunction a = sample_grid(es, 1);
  const GridFunction b = sample_grid(es, 1);
  const GridFunction c = sample_grid(es, std::max<std::size_t>(threads, 4));
  out.push_back(make_flag("evolve", "grid sums bit-identical across runs and thread counts",
                          a.samples == b.samples && a.samples == c.samples));

  using big = boost::multiprecision::cpp_bin_float_50;
  const big two_pi = 8 * boost::multiprecision::atan(big(1));
  double worst = 0.0;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> nd(1, 100000);
  for (int i = 0; i < 400; ++i) {
    const std::size_t n = i < 10 ? 100000 - i : nd(rng);
    for (int k = 1; k <= 10; ++k) {
      const double n2 = static_cast<double>(n) * static_cast<double>(n);
      const double r = reduced_phase(n2, k);
      big exact = big(n) * big(n) * k;
      exact -= two_pi * boost::multiprecision::round(exact / two_pi);
      double d = std::fabs(static_cast<double>(exact) - r);
      d = std::min(d, std::fabs(d - 2 * kPi));
      worst = std::max(worst, d);
    }
  }
  out.push_back(make("evolve", "phase reduction n^2 k mod 2 pi (n <= 1e5, k <= 10)", worst, 1e-10));
}

void fatstate_checks(std::vector<IdentityCheck>& out) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_conc = 0.0;
  bool nonneg = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + trial % 6;
    std::vector<double> p(k), q(k);
    double sp = 0, sq = 0;
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = u(rng);
      q[i] = u(rng);
      sp += p[i];
      sq += q[i];
    }
    for (std::size_t i = 0; i < k; ++i) {
      p[i] /= sp * (1 + 1e-15);
      q[i] /= sq * (1 + 1e-15);
    }
    const double lam = u(rng);
    std::vector<double> mix(k);
    for (std::size_t i = 0; i < k; ++i) mix[i] = lam * p[i] + (1 - lam) * q[i];
    const double sp_ = von_neumann_entropy(p);
    const double sq_ = von_neumann_entropy(q);
    nonneg = nonneg && sp_ >= 0 && sq_ >= 0;
    worst_conc = std::max(worst_conc, lam * sp_ + (1 - lam) * sq_ - von_neumann_entropy(mix));
  }
  out.push_back(make_flag("fatstate", "entropy non-negative", nonneg));
  out.push_back(make("fatstate", "entropy concave under mixing", std::max(worst_conc, 0.0), 1e-12));

  const FatTailWeights w = fat_weights(0.5, 1000000);
  double mass = 0.0;
  for (double p : w.p) mass += p;
  out.push_back(make("fatstate", "fat-tail weights plus tail mass sum to 1",
                     std::fabs(mass + w.tail_mass - 1.0), 1e-10));
  const auto inv = inverse_square_entropy(100000);
  double inv_mass = 0.0;
  for (int n = 1; n <= 1000000; ++n) inv_mass += 6.0 / (kPi * kPi) / (double(n) * n);
  out.push_back(make("fatstate", "inverse-square weights sum to 1 within tail 1/L",
                     std::fabs(inv_mass - 1.0), 6.0 / (kPi * kPi) / 1e6 * 1.01));
  (void)inv;

  const auto cut = decade_cutoffs(1000, 1000000);
  // Square-well energy with n^-2 weights.
  {
    std::vector<double> sums;
    double s = 0.0;
    std::size_t next = 0;
    for (std::size_t n = 1; n <= cut.back(); ++n) {
      s += 6.0 / (kPi * kPi);  // (6/pi^2)/n^2 * n^2
      if (n == cut[next]) {
        sums.push_back(s);
        ++next;
      }
    }
    out.push_back(make_flag("fatstate", "classifier: n^-2 weights with square-well energy diverge",
                            classify_growth(cut, sums).divergent));
  }
  const ProbeReport coul = energy_divergence(w, Spectrum::Coulomb, cut);
  out.push_back(make_flag("fatstate", "classifier: fat-tail weights with Coulomb energy converge",
                          coul.at("energy_divergent") == 0.0 &&
                              coul.at("inverse_n_energy_divergent") == 0.0));
  bool conj = true;
  std::string detail;
  for (Spectrum s : {Spectrum::SquareWell, Spectrum::Oscillator, Spectrum::Coulomb}) {
    const ConjectureRow row = conjecture_check(w, s, cut);
    conj = conj && row.holds() && row.entropy_divergent;
    detail += to_string(s) + (row.holds() ? ":ok " : ":FAIL ");
  }
  out.push_back(make_flag("fatstate", "divergent entropy implies divergent energy or size", conj, detail));
}

void daemon_checks(std::vector<IdentityCheck>& out) {
  double tri = 0.0;
  double excess_neg = 0.0;
  for (double e : uniform_eps(999)) {
    if (e < 0.5) {
      const double total = energy_left_undisturbed(e) + trap_probability(e) / (e * e);
      tri = std::max(tri, std::fabs(total - (1.0 + adiabatic_delta_e_closed(e))) /
                              std::max(1.0, 1.0 + adiabatic_delta_e_closed(e)));
    }
    if (std::fabs(e - 0.5) > 1e-12) excess_neg = std::max(excess_neg, luders_excess(e) > 0 ? 0.0 : 1.0);
  }
  out.push_back(make("daemon", "undisturbed left plus right energy equals 1 + dE", tri, 1e-10));
  out.push_back(make("daemon", "insertion inequality strict off centre", excess_neg, 0.0));
  const double zero = bisect_luders_zero(0.1, 0.9, 1e-9);
  out.push_back(make("daemon", "unique zero of the inequality at eps = 1/2", std::fabs(zero - 0.5), 1e-9));

  std::vector<double> xs, ys;
  for (int i = 0; i <= 20; ++i) {
    const double e = std::pow(10.0, -3.0 + 2.0 * i / 20.0);
    xs.push_back(e);
    ys.push_back(std::fabs(adiabatic_delta_e_closed(e) - adiabatic_delta_e_series(e)));
  }
  const double slope = slope_loglog(xs, ys);
  out.push_back({"daemon", "series residual exponent >= 3 on [1e-3, 1e-1]", slope >= 3.0, slope, 3.0,
                 "fitted exponent"});
  double margin = 0.0;
  for (double e : epsilon_grid(1e-3, 0.5, 100)) margin = std::min(margin, daemon_ledger(e).second_law_margin);
  out.push_back(make("daemon", "second-law margin non-negative on (0, 1/2]", -margin, 0.0));
}

void cli_checks(std::vector<IdentityCheck>& out) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / ("qsplit_identities_" + std::to_string(::getpid()));
  auto run_once = [&](const std::string& tag, const std::string& threads) {
    const fs::path dir = base / tag;
    std::vector<std::string> args = {"qsplit", "daemon", "--epsilon-grid", "1e-3:0.5:50", "--out",
                                     dir.string(), "--threads", threads, "--quiet"};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    const int rc = cli::run(static_cast<int>(argv.size()), argv.data());
    std::ifstream in(dir / "ledger.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return std::make_pair(rc, ss.str());
  };
  const auto a = run_once("a", "1");
  const auto b = run_once("b", "4");
  std::error_code ec;
  fs::remove_all(base, ec);
  out.push_back(make_flag("cli", "identical flags give byte-identical CSV",
                          a.first == 0 && b.first == 0 && !a.second.empty() && a.second == b.second));
}

}  // namespace

std::vector<IdentityCheck> run_identities(std::size_t threads) {
  std::vector<IdentityCheck> out;
  specfun_checks(out);
  wellcore_checks(out);
  splitter_checks(out);
  evolve_checks(out, threads);
  fatstate_checks(out);
  daemon_checks(out);
  cli_checks(out);
  return out;
}

}  // namespace qsplit
