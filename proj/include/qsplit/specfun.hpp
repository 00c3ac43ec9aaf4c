#pragma once

#include <cstddef>
#include <vector>

namespace qsplit::specfun {

struct SpecialValue {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

/// Digamma function for u > 0. Throws DomainError otherwise.
///
/// The argument is lifted above 10 with psi(u) = psi(u+1) - 1/u and the
/// Bernoulli asymptotic series is applied there. The reported error bound is
/// a rounding estimate over every accumulated term plus the first omitted
/// series term; it is below 1e-12 whenever |psi(u)| is of order one and
/// grows like ulp(1/u) as u -> 0.
SpecialValue digamma(double u);

/// Trigamma function psi'(u) = sum_{k>=0} 1/(u+k)^2 for u > 0.
SpecialValue trigamma(double u);

/// Normalized oscillator eigenfunction phi_n(x) (m = omega = hbar = 1),
/// computed by the three-term recurrence on the normalized functions with a
/// separately tracked exponent, so neither 2^n n! nor exp(-x^2/2) is formed.
double hermite_fn(std::size_t n, double x);

/// phi_0(x) ... phi_{n_max}(x) in one recurrence pass.
std::vector<double> hermite_fns(std::size_t n_max, double x);

/// sin(pi x) and cos(pi x) with exact argument reduction; exact zeros at the
/// integers (sin) and half-integers (cos).
double sin_pi(double x);
double cos_pi(double x);

inline constexpr std::size_t kMaxHermiteIndex = 100000;

}  // namespace qsplit::specfun
