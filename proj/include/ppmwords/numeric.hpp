#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace ppmwords {

template <typename Scalar>
inline constexpr Scalar kPi = Scalar(3.141592653589793238462643383279502884L);

/// log(sum(exp(v))) with the max-term shift. Returns -inf for an empty input.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar top = v.maxCoeff();
  if (!std::isfinite(top)) return top;
  return top + std::log((v.derived().array() - top).exp().sum());
}

/// log(exp(a) + exp(b)).
template <typename Scalar>
Scalar log_add(Scalar a, Scalar b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<Scalar>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

/// sum_{m >= first} m^{-s} for s > 1 and first >= 1: direct summation up to
/// a cutoff, then the Euler-Maclaurin remainder.
template <typename Scalar>
Scalar power_tail(Scalar s, long long first) {
  constexpr long long kCutoff = 64;
  Scalar direct = 0;
  long long m = first;
  for (; m < kCutoff; ++m) direct += std::pow(Scalar(m), -s);
  // Remainder sum_{j >= m} j^{-s}.
  const Scalar c = Scalar(m);
  const Scalar cs = std::pow(c, -s);
  Scalar rest = c * cs / (s - 1) + cs / 2;
  Scalar rising = s;                       // s (s+1) ... rising factorial
  Scalar power = cs / c;                   // c^{-s-1}
  const Scalar bernoulli_over_factorial[] = {Scalar(1) / 12, Scalar(-1) / 720,
                                             Scalar(1) / 30240, Scalar(-1) / 1209600};
  for (int j = 0; j < 4; ++j) {
    rest += bernoulli_over_factorial[j] * rising * power;
    rising *= (s + Scalar(2 * j + 1)) * (s + Scalar(2 * j + 2));
    power /= c * c;
  }
  return direct + rest;
}

/// Riemann zeta function for s > 1.
template <typename Scalar>
Scalar zeta(Scalar s) {
  return power_tail(s, 1);
}

inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

}  // namespace ppmwords
