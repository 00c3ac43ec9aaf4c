#include "qsplit/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qsplit/error.hpp"
#include "qsplit/summation.hpp"

namespace qsplit::specfun {
namespace {

constexpr double kLiftThreshold = 10.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_{2k} for k = 1..8.
constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,   1.0 / 42.0,     -1.0 / 30.0,
    5.0 / 66.0,      -691.0 / 2730.0, 7.0 / 6.0,    -3617.0 / 510.0,
};

void require_positive(double u, const char* name) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw DomainError(std::string(name) + ": argument must be a finite positive number, got " +
                      std::to_string(u));
  }
}

}  // namespace

SpecialValue digamma(double u) {
  require_positive(u, "digamma");
  CompensatedSum lift;
  double lift_abs = 0.0;
  double x = u;
  while (x < kLiftThreshold) {
    lift.add(-1.0 / x);
    lift_abs += 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
  const double inv2 = 1.0 / (x * x);
  double power = inv2;
  double series = 0.0;
  double last = 0.0;
  for (std::size_t k = 0; k < kBernoulli.size() - 1; ++k) {
    const double term = kBernoulli[k] / (2.0 * static_cast<double>(k + 1)) * power;
    series += term;
    power *= inv2;
  }
  last = std::fabs(kBernoulli.back() / 16.0 * power);
  const double asym = std::log(x) - 0.5 / x - series;
  SpecialValue out;
  out.value = asym + lift.value();
  // x is exact (u plus small integers) only up to the rounding of each
  // increment; account for that through the slope 1/u^2 of the lift terms.
  out.abs_error_bound = 4.0 * kEps * (std::fabs(asym) + lift_abs) + last;
  return out;
}

SpecialValue trigamma(double u) {
  require_positive(u, "trigamma");
  CompensatedSum lift;
  double lift_abs = 0.0;
  double x = u;
  while (x < kLiftThreshold) {
    const double t = 1.0 / (x * x);
    lift.add(t);
    lift_abs += t;
    x += 1.0;
  }
  // psi'(x) ~ 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double power = inv2 * inv;
  double series = 0.0;
  for (std::size_t k = 0; k < kBernoulli.size() - 1; ++k) {
    series += kBernoulli[k] * power;
    power *= inv2;
  }
  const double last = std::fabs(kBernoulli.back() * power);
  const double asym = inv + 0.5 * inv2 + series;
  SpecialValue out;
  out.value = asym + lift.value();
  out.abs_error_bound = 4.0 * kEps * (asym + lift_abs) + last;
  return out;
}

double sin_pi(double x) {
  // Reduce to r in [-1, 1] with x = r + 2m, then fold onto [-1/2, 1/2].
  double r = std::remainder(x, 2.0);
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(std::numbers::pi * r);
}

double cos_pi(double x) {
  double r = std::fabs(std::remainder(x, 2.0));  // r in [0, 1]
  if (r == 0.5) return 0.0;
  if (r < 0.25) return std::cos(std::numbers::pi * r);
  if (r <= 0.75) return std::sin(std::numbers::pi * (0.5 - r));
  return -std::cos(std::numbers::pi * (1.0 - r));
}

namespace {

constexpr double kRescaleHigh = 0x1p+480;
constexpr double kRescaleLow = 0x1p-480;
constexpr double kLogRescale = 480.0 * std::numbers::ln2;

// Runs phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1} on scaled
// values; the true value is mantissa * exp(log_scale). The visitor receives
// (k, mantissa, log_scale).
template <class Visit>
void hermite_recurrence(std::size_t n_max, double x, Visit&& visit) {
  const double quarter_pi = std::pow(std::numbers::pi, -0.25);
  double log_scale = -0.5 * x * x;
  double prev = 0.0;
  double cur = quarter_pi;
  visit(std::size_t{0}, cur, log_scale);
  for (std::size_t k = 0; k < n_max; ++k) {
    const double kd = static_cast<double>(k);
    const double next = x * std::sqrt(2.0 / (kd + 1.0)) * cur - std::sqrt(kd / (kd + 1.0)) * prev;
    prev = cur;
    cur = next;
    const double mag = std::fabs(cur) + std::fabs(prev);
    if (mag > kRescaleHigh) {
      cur *= kRescaleLow;
      prev *= kRescaleLow;
      log_scale += kLogRescale;
    } else if (mag != 0.0 && mag < kRescaleLow) {
      cur *= kRescaleHigh;
      prev *= kRescaleHigh;
      log_scale -= kLogRescale;
    }
    visit(k + 1, cur, log_scale);
  }
}

void require_index(std::size_t n) {
  if (n > kMaxHermiteIndex) {
    throw PreconditionError("hermite_fn: index " + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxHermiteIndex));
  }
}

double unscale(double mant, double log_scale) {
  if (mant == 0.0) return 0.0;
  const double v = std::copysign(std::exp(std::log(std::fabs(mant)) + log_scale), mant);
  return std::fpclassify(v) == FP_SUBNORMAL ? 0.0 : v;
}

}  // namespace

double hermite_fn(std::size_t n, double x) {
  require_index(n);
  double mant = 0.0;
  double scale = 0.0;
  hermite_recurrence(n, x, [&](std::size_t k, double m, double s) {
    if (k == n) {
      mant = m;
      scale = s;
    }
  });
  return unscale(mant, scale);
}

std::vector<double> hermite_fns(std::size_t n_max, double x) {
  require_index(n_max);
  std::vector<double> out(n_max + 1, 0.0);
  hermite_recurrence(n_max, x,
                     [&](std::size_t k, double m, double s) { out[k] = unscale(m, s); });
  return out;
}

}  // namespace qsplit::specfun
