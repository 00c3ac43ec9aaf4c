#include "qsplit/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "qsplit/error.hpp"
#include "qsplit/fatstate.hpp"
#include "qsplit/specfun.hpp"
#include "qsplit/splitter.hpp"
#include "qsplit/summation.hpp"

namespace qsplit {
namespace {

// 2 pi = kTwoPiHi + kTwoPiLo to about 1e-32.
constexpr double kTwoPiHi = 6.283185307179586232;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

// Terms between exact re-anchoring of the rotation recurrence.
constexpr std::size_t kAnchorStride = 64;

double energy_scale(const BasisDescriptor& b, double t) {
  return b.is_well() ? t / (b.width * b.width) : t;
}

double energy_base(const BasisDescriptor& b, std::size_t n) {
  const double nd = static_cast<double>(n);
  return b.is_well() ? nd * nd : nd + 0.5;
}

// Reduce n*u modulo 2 exactly (n*u split into two doubles).
double mod2_product(double n, double u) {
  const double hi = n * u;
  const double lo = std::fma(n, u, -hi);
  const double r = hi - 2.0 * std::nearbyint(0.5 * hi);
  return r + lo;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = default_thread_count();
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t k = 0; k < threads; ++k) {
    const std::size_t b = k * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double ProbeReport::at(const std::string& key) const {
  const auto it = scalars.find(key);
  if (it == scalars.end()) throw std::out_of_range("ProbeReport " + name + ": no scalar " + key);
  return it->second;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("QSPLIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

double reduced_phase(double n_sq, double scale) {
  const double hi = n_sq * scale;
  const double lo = std::fma(n_sq, scale, -hi);
  const double q = std::nearbyint(hi / kTwoPiHi);
  return std::fma(-q, kTwoPiHi, hi) - q * kTwoPiLo + lo;
}

SpectralState evolve_phase(const SpectralState& state, double t) {
  if (!(t >= 0.0)) throw PreconditionError("evolve_phase: t must be non-negative");
  if (t == 0.0) return state;
  const BasisDescriptor& b = state.basis();
  const double scale = energy_scale(b, t);
  std::vector<Term> out = state.terms();
  for (auto& term : out) {
    const double ph = reduced_phase(energy_base(b, term.n), scale);
    term.c *= std::complex<double>(std::cos(ph), -std::sin(ph));
  }
  return SpectralState(b, std::move(out), state.normalized());
}

GridFunction sample_grid(const EvolutionSpec& spec, std::size_t threads) {
  const SpectralState& st = spec.state;
  const BasisDescriptor& b = st.basis();
  const std::size_t N = spec.terms == 0 ? st.size() : spec.terms;
  if (N < 1) throw PreconditionError("sample_grid: need at least one term");
  if (N > st.size()) {
    throw PreconditionError("sample_grid: requested " + std::to_string(N) + " terms but state has " +
                            std::to_string(st.size()));
  }
  GridFunction g;
  g.lo = spec.grid.lo;
  g.hi = spec.grid.hi;
  g.time = spec.time;
  g.samples.assign(spec.grid.count, {0.0, 0.0});
  g.validate();
  if (b.is_well() && (g.lo < b.lo() - 1e-12 || g.hi > b.hi() + 1e-12)) {
    throw PreconditionError("sample_grid: grid leaves the basis support");
  }

  const SpectralState evolved = evolve_phase(st, spec.time);
  const auto& terms = evolved.terms();
  std::vector<double> dre(N);
  std::vector<double> dim(N);
  std::vector<double> idx(N);
  const double amp = b.is_well() ? std::sqrt(2.0 / b.width) : 1.0;
  for (std::size_t k = 0; k < N; ++k) {
    dre[k] = terms[k].c.real() * amp;
    dim[k] = terms[k].c.imag() * amp;
    idx[k] = static_cast<double>(terms[k].n);
  }
  // Dense index runs allow the rotation recurrence; sparse ones fall back
  // to direct evaluation.
  const bool dense = terms.front().n == 1 && terms[N - 1].n == N;

  auto eval_well = [&](double xi) {
    double u = b.kind == BasisKind::SubRight ? (xi - b.offset) / b.width : xi / b.width;
    u = std::clamp(u, 0.0, 1.0);
    CompensatedSum re;
    CompensatedSum im;
    if (dense) {
      const double step_c = specfun::cos_pi(u);
      const double step_s = specfun::sin_pi(u);
      for (std::size_t k0 = 0; k0 < N; k0 += kAnchorStride) {
        const double m = mod2_product(idx[k0], u);
        double zc = specfun::cos_pi(m);
        double zs = specfun::sin_pi(m);
        const std::size_t k1 = std::min(N, k0 + kAnchorStride);
        for (std::size_t k = k0; k < k1; ++k) {
          re.add(dre[k] * zs);
          im.add(dim[k] * zs);
          const double nc = zc * step_c - zs * step_s;
          zs = zs * step_c + zc * step_s;
          zc = nc;
        }
      }
    } else {
      for (std::size_t k = 0; k < N; ++k) {
        const double s = specfun::sin_pi(mod2_product(idx[k], u));
        re.add(dre[k] * s);
        im.add(dim[k] * s);
      }
    }
    return std::complex<double>(re.value(), im.value());
  };

  auto eval_osc = [&](double x) {
    const auto phi = specfun::hermite_fns(terms[N - 1].n, x);
    CompensatedSum re;
    CompensatedSum im;
    for (std::size_t k = 0; k < N; ++k) {
      re.add(dre[k] * phi[terms[k].n]);
      im.add(dim[k] * phi[terms[k].n]);
    }
    return std::complex<double>(re.value(), im.value());
  };

  parallel_for(g.samples.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double xi = g.xi(i);
      g.samples[i] = b.is_well() ? eval_well(xi) : eval_osc(xi);
    }
  });
  return g;
}

namespace {

double max_abs(const GridFunction& g) {
  double m = 0.0;
  for (const auto& z : g.samples) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_imag(const GridFunction& g) {
  double m = 0.0;
  for (const auto& z : g.samples) m = std::max(m, std::fabs(z.imag()));
  return m;
}

std::vector<double> real_parts(const GridFunction& g) {
  std::vector<double> v(g.samples.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.samples[i].real();
  return v;
}

}  // namespace

ProbeReport boundary_decay_probe(double epsilon, double t, std::size_t N,
                                 std::size_t window_points, std::size_t threads) {
  if (!(t > 0.0)) throw PreconditionError("boundary_decay_probe: t must be positive");
  const SplitResult split = sudden_split(SplitSpec::make(epsilon), N);
  const double barrier = split.left.basis().hi();
  const double width = 1e-3;

  auto window_max = [&](double time, double w, std::size_t pts, GridFunction* keep) {
    EvolutionSpec es{split.left, time, N, {barrier - w, barrier, pts}};
    GridFunction g = sample_grid(es, threads);
    const double m = max_abs(g);
    if (keep) *keep = std::move(g);
    return m;
  };

  ProbeReport r;
  r.name = "boundary_decay";
  GridFunction at_t;
  const double m0 = window_max(0.0, width, window_points, nullptr);
  const double m1 = window_max(t, width, window_points, &at_t);
  r.scalars["time_tau"] = t;
  r.scalars["terms"] = static_cast<double>(N);
  r.scalars["epsilon"] = epsilon;
  r.scalars["window_width"] = width;
  r.scalars["window_max_t0"] = m0;
  r.scalars["window_max"] = m1;
  r.scalars["decay_ratio"] = m1 > 0.0 ? m0 / m1 : INFINITY;
  r.scalars["edge_value_t0"] = std::numbers::sqrt2 * specfun::sin_pi(barrier);
  r.scalars["window_max_half"] = window_max(t, 0.5 * width, window_points / 2 + 1, nullptr);
  r.scalars["window_max_quarter"] = window_max(t, 0.25 * width, window_points / 4 + 1, nullptr);
  r.scalars["barrier_abs"] = std::abs(at_t.samples.back());
  EvolutionSpec wall{split.left, t, N, {0.0, width, 2}};
  r.scalars["far_wall_abs"] = std::abs(sample_grid(wall, 1).samples.front());
  r.series = std::move(at_t);
  return r;
}

ProbeReport propagation_probe(double epsilon, std::size_t M, const std::vector<double>& times,
                              const PropagationOptions& opt, std::size_t threads) {
  if (M < 1) throw PreconditionError("propagation_probe: M must be at least 1");
  if (times.empty()) throw PreconditionError("propagation_probe: need at least one time");
  const SplitResult split = sudden_split(SplitSpec::make(epsilon), M);
  const SpectralState state = split.left.truncated(M, true);
  if (!(opt.window_hi > 0.0 && opt.window_hi <= state.basis().hi())) {
    throw PreconditionError("propagation_probe: far window must lie inside the chamber");
  }
  ProbeReport r;
  r.name = "propagation";
  r.scalars["epsilon"] = epsilon;
  r.scalars["levels"] = static_cast<double>(M);
  r.scalars["window_hi"] = opt.window_hi;
  r.scalars["threshold"] = opt.threshold;
  double rise = -1.0;
  double first_im = 0.0;
  double last_im = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    EvolutionSpec es{state, times[i], M, {0.0, opt.window_hi, opt.window_points}};
    GridFunction g = sample_grid(es, threads);
    const double ma = max_abs(g);
    const double mi = max_abs_imag(g);
    const std::string key = "t" + std::to_string(i);
    r.scalars[key + "_time_tau"] = times[i];
    r.scalars[key + "_max_abs"] = ma;
    r.scalars[key + "_max_im"] = mi;
    if (i == 0) first_im = mi;
    last_im = mi;
    if (rise < 0.0 && mi > opt.threshold) rise = times[i];
    if (i + 1 == times.size()) r.series = std::move(g);
  }
  r.scalars["rise_time_tau"] = rise;
  r.scalars["early_max_im"] = first_im;
  r.scalars["late_max_im"] = last_im;
  r.scalars["rise_factor"] = first_im > 0.0 ? last_im / first_im : INFINITY;
  return r;
}

std::size_t count_extrema(const std::vector<double>& values, double noise_floor) {
  std::size_t count = 0;
  int last = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (std::fabs(d) <= noise_floor) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

std::size_t count_bursts(const std::vector<double>& values, std::size_t block, double factor) {
  if (block == 0 || values.size() < 3 * block) return 0;
  const std::size_t nb = values.size() / block;
  std::vector<double> means(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    CompensatedSum s;
    for (std::size_t i = j * block; i < (j + 1) * block; ++i) s.add(values[i]);
    means[j] = s.value() / static_cast<double>(block);
  }
  std::vector<double> steps(nb - 1);
  for (std::size_t j = 0; j + 1 < nb; ++j) steps[j] = std::fabs(means[j + 1] - means[j]);
  std::vector<double> sorted = steps;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                   sorted.end());
  const double thr = factor * sorted[sorted.size() / 2];
  std::size_t count = 0;
  bool inside = false;
  for (double s : steps) {
    const bool above = s > thr;
    if (above && !inside) ++count;
    inside = above;
  }
  return count;
}

ProbeReport ringing_snapshot(double nu, int k, std::size_t N, const RingingOptions& opt,
                             std::size_t threads) {
  if (k < 1) throw PreconditionError("ringing_snapshot: k must be at least 1");
  if (N < 1) throw PreconditionError("ringing_snapshot: N must be at least 1");
  const FatTailWeights w = fat_weights(nu, std::max<std::size_t>(N, 10));
  const SpectralState state = fat_tail_state(w, N);
  const double t = opt.time.value_or(static_cast<double>(k));
  EvolutionSpec es{state, t, N, {0.0, 1.0, opt.points}};
  GridFunction g = sample_grid(es, threads);
  const auto re = real_parts(g);
  ProbeReport r;
  r.name = "ringing";
  r.scalars["nu"] = nu;
  r.scalars["k"] = k;
  r.scalars["time_tau"] = t;
  r.scalars["terms"] = static_cast<double>(N);
  r.scalars["points"] = static_cast<double>(opt.points);
  r.scalars["extrema_count"] = static_cast<double>(count_extrema(re));
  r.scalars["burst_count"] = static_cast<double>(count_bursts(re));
  r.scalars["max_abs_re"] = std::fabs(*std::max_element(re.begin(), re.end(), [](double a, double b) {
    return std::fabs(a) < std::fabs(b);
  }));
  if (opt.keep_series) r.series = std::move(g);
  return r;
}

double total_variation(const std::vector<double>& values) {
  CompensatedSum tv;
  for (std::size_t i = 1; i < values.size(); ++i) tv.add(std::fabs(values[i] - values[i - 1]));
  return tv.value();
}

ProbeReport fractal_indicator(const SpectralState& state, double t,
                              const std::vector<std::size_t>& N_sequence,
                              const FractalOptions& opt, std::size_t threads) {
  if (!(t > 0.0)) throw PreconditionError("fractal_indicator: t must be positive");
  if (N_sequence.empty()) throw PreconditionError("fractal_indicator: empty N sequence");
  for (std::size_t i = 1; i < N_sequence.size(); ++i) {
    if (N_sequence[i] <= N_sequence[i - 1]) {
      throw PreconditionError("fractal_indicator: N sequence must increase");
    }
  }
  const std::size_t n_max = N_sequence.back();
  std::size_t points = opt.points;
  if (points == 0) {
    const double w = state.basis().is_well() ? state.basis().width : 1.0;
    points = std::max<std::size_t>(
        1001, static_cast<std::size_t>(8.0 * static_cast<double>(n_max) * (opt.hi - opt.lo) / w));
  }
  ProbeReport r;
  r.name = "fractal";
  r.scalars["time_tau"] = t;
  r.scalars["points"] = static_cast<double>(points);
  std::vector<double> tvs;
  for (std::size_t N : N_sequence) {
    EvolutionSpec es{state, t, N, {opt.lo, opt.hi, points}};
    const double tv = total_variation(real_parts(sample_grid(es, threads)));
    r.scalars["tv_" + std::to_string(N)] = tv;
    tvs.push_back(tv);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < tvs.size(); ++i) monotone = monotone && tvs[i] > tvs[i - 1];
  const double rel = tvs.size() > 1 ? (tvs.back() - tvs[tvs.size() - 2]) / tvs[tvs.size() - 2] : 0.0;
  r.scalars["relative_change_last"] = rel;
  r.scalars["growing"] = (monotone && rel > 0.01) ? 1.0 : 0.0;
  return r;
}

std::vector<std::vector<double>> grid_rows(const GridFunction& g) {
  std::vector<std::vector<double>> rows;
  rows.reserve(g.samples.size());
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    rows.push_back({g.xi(i), g.samples[i].real(), g.samples[i].imag()});
  }
  return rows;
}

nlohmann::json grid_sidecar(const GridFunction& g, std::size_t terms, const BasisDescriptor& basis) {
  return nlohmann::json{{"time_tau", g.time}, {"terms", terms}, {"basis", basis}};
}

void to_json(nlohmann::json& j, const ProbeReport& r) {
  j = nlohmann::json{{"name", r.name}, {"scalars", r.scalars}};
}

}  // namespace qsplit
