#pragma once

// Dense polynomial / truncated power-series arithmetic over complex scalars.
// Index k of a coefficient vector holds the coefficient of X^k.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rsconv {

namespace detail {

// Complex arithmetic over __float128. std::complex is only specified for the
// standard floating types, so the few operations needed are spelled out.
using wide = __float128;

struct wcplx {
  wide re = 0;
  wide im = 0;

  wcplx() = default;
  constexpr wcplx(wide r, wide i = 0) : re(r), im(i) {}
  explicit wcplx(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> narrow() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  friend wcplx operator+(wcplx a, wcplx b) { return {a.re + b.re, a.im + b.im}; }
  friend wcplx operator-(wcplx a, wcplx b) { return {a.re - b.re, a.im - b.im}; }
  friend wcplx operator-(wcplx a) { return {-a.re, -a.im}; }
  friend wcplx operator*(wcplx a, wcplx b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  wcplx& operator+=(wcplx b) { return *this = *this + b; }
  wcplx& operator-=(wcplx b) { return *this = *this - b; }
  wcplx& operator*=(wcplx b) { return *this = *this * b; }
};

inline double magnitude(wcplx z) {
  const double r = static_cast<double>(z.re), i = static_cast<double>(z.im);
  return std::hypot(r, i);
}
inline double magnitude(std::complex<double> z) { return std::abs(z); }

}  // namespace detail

// Product truncated to `max_len` coefficients (0 = full product).
template <class C>
std::vector<C> series_multiply(std::span<const C> a, std::span<const C> b,
                               std::size_t max_len = 0) {
  if (a.empty() || b.empty()) return {};
  std::size_t n = a.size() + b.size() - 1;
  if (max_len != 0) n = std::min(n, max_len);
  std::vector<C> out(n, C(0));
  for (std::size_t i = 0; i < a.size() && i < n; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) out[i + j] += a[i] * b[j];
  return out;
}

template <class C>
std::vector<C> series_multiply(const std::vector<C>& a, const std::vector<C>& b,
                               std::size_t max_len = 0) {
  return series_multiply(std::span<const C>(a), std::span<const C>(b), max_len);
}

// 1/q to X^order for q with constant term 1 (by the linear recurrence
// u_n = -sum_{j>=1} q_j u_{n-j}).
template <class C>
std::vector<C> series_reciprocal_monic(const std::vector<C>& q, int order) {
  if (q.empty()) throw std::invalid_argument("series_reciprocal_monic: empty input");
  if (order < 0) throw std::invalid_argument("series_reciprocal_monic: negative order");
  std::vector<C> u(static_cast<std::size_t>(order) + 1, C(0));
  u[0] = C(1);
  for (int n = 1; n <= order; ++n) {
    C acc(0);
    for (int j = 1; j <= n && j < static_cast<int>(q.size()); ++j) acc += q[j] * u[n - j];
    u[n] = -acc;
  }
  return u;
}

// prod_k (1 - roots[k] X).
template <class C>
std::vector<C> poly_from_inverse_roots(std::span<const C> roots) {
  std::vector<C> out{C(1)};
  for (const C& r : roots) {
    std::vector<C> next(out.size() + 1, C(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
      next[i] += out[i];
      next[i + 1] -= r * out[i];
    }
    out = std::move(next);
  }
  return out;
}

// Horner evaluation.
inline std::complex<double> poly_eval(std::span<const std::complex<double>> c,
                                      std::complex<double> x) {
  std::complex<double> acc(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace rsconv
