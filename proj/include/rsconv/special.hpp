#pragma once

// Complex log-gamma and the Riemann zeta function by Euler-Maclaurin summation
// with an explicit remainder bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>

#include "rsconv/errors.hpp"

namespace rsconv {

using cplx = std::complex<double>;

namespace detail {

inline const std::array<double, 32>& bernoulli_even() {
  static const std::array<double, 32> table = [] {
    std::array<double, 32> b{};
    for (std::size_t k = 0; k < b.size(); ++k)
      b[k] = boost::math::bernoulli_b2n<double>(static_cast<int>(k));
    return b;
  }();
  return table;
}

}  // namespace detail

// Distance from z to the nearest pole of Gamma (non-positive integers);
// +inf when Re z > 0.
inline double gamma_pole_distance(cplx z) {
  if (z.real() > 0.5) return std::numeric_limits<double>::infinity();
  const double n = std::min(0.0, std::round(z.real()));
  return std::abs(z - cplx(n, 0.0));
}

// log Gamma(z) on the branch continuous off the negative real axis with
// log Gamma(z+1) = log Gamma(z) + log z (principal log). Upward recurrence
// to |z| >= 20 followed by the Stirling series.
inline cplx log_gamma(cplx z) {
  if (gamma_pole_distance(z) < 1e-12)
    throw pole_hit("log_gamma: argument at a pole of Gamma");
  if (z.real() < -60.0) {
    // Reflection for far-left arguments; only the real part is branch-exact.
    const cplx pi(std::numbers::pi, 0.0);
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  cplx shift(0.0, 0.0);
  while (std::abs(z) < 20.0 || z.real() < 0.5) {
    shift += std::log(z);
    z += 1.0;
  }
  const auto& B = detail::bernoulli_even();
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series(0.0, 0.0);
  cplx pw = inv;
  for (int k = 1; k <= 12; ++k) {
    series += B[k] / (2.0 * k * (2.0 * k - 1.0)) * pw;
    pw *= inv2;
  }
  return (z - 0.5) * std::log(z) - z +
         0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

struct zeta_result {
  cplx value;
  double error_bound;  // bound on the Euler-Maclaurin remainder plus rounding
};

// zeta(s) = sum_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2
//         + sum_{k=1}^{M} B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1} + R,
// |R| <= |T_{M+1}| |s+2M+1| / (sigma+2M+1), valid for sigma > -(2M+1).
inline zeta_result zeta_em(cplx s, int N = 0, int M = 12) {
  if (std::abs(s - 1.0) < 1e-14) throw pole_hit("zeta: s = 1");
  if (s.real() <= -(2.0 * M + 1.0))
    throw parameter_domain("zeta_em: Re(s) too far left for the remainder");
  if (N <= 0)
    N = std::max(10, static_cast<int>(std::ceil(std::abs(s) / 2.0)) + 10);
  const auto& B = detail::bernoulli_even();

  cplx sum(0.0, 0.0);
  double abs_sum = 0.0;
  for (int n = 1; n < N; ++n) {
    const cplx term = std::exp(-s * std::log(static_cast<double>(n)));
    sum += term;
    abs_sum += std::abs(term);
  }
  const double logN = std::log(static_cast<double>(N));
  const cplx Nms = std::exp(-s * logN);
  sum += Nms * static_cast<double>(N) / (s - 1.0) + 0.5 * Nms;

  // rising = s(s+1)...(s+2k-2), fact = (2k)!, power = N^{-s-2k+1}
  cplx rising = s;
  double fact = 2.0;
  cplx power = Nms / static_cast<double>(N);
  cplx term(0.0, 0.0);
  for (int k = 1; k <= M + 1; ++k) {
    term = B[k] / fact * rising * power;
    if (k <= M) sum += term;
    const double a = 2.0 * k - 1.0, b = 2.0 * k;
    rising *= (s + a) * (s + b);
    fact *= (b + 1.0) * (b + 2.0);
    power /= static_cast<double>(N) * N;
  }
  const double remainder =
      std::abs(term) * std::abs(s + (2.0 * M + 1.0)) / (s.real() + 2.0 * M + 1.0);
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() *
                          (abs_sum + std::abs(sum));
  return {sum, remainder + rounding};
}

// Left of the critical strip the direct sum loses digits to n^{-s} growth;
// use zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s) there.
inline zeta_result zeta_reflected(cplx s) {
  const auto right = zeta_em(1.0 - s);
  constexpr double pi = std::numbers::pi;
  const cplx chi = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(pi) + log_gamma(1.0 - s)) *
                   std::sin(pi * s / 2.0);
  const cplx value = chi * right.value;
  const double rounding =
      64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(s)) * std::abs(value);
  return {value, std::abs(chi) * right.error_bound + rounding};
}

inline zeta_result zeta_checked(cplx s) {
  return s.real() < 0.0 ? zeta_reflected(s) : zeta_em(s);
}

inline cplx zeta(cplx s) { return zeta_checked(s).value; }

// Rigorous upper bound for zeta(sigma), sigma > 1.
inline double zeta_upper(double sigma) {
  const auto z = zeta_em(cplx(sigma, 0.0));
  return z.value.real() + z.error_bound;
}

}  // namespace rsconv
