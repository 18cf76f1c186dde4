#pragma once

// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "rsconv/errors.hpp"

namespace rsconv {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int initial_panels = 1;
  std::size_t max_evaluations = 2000000;
};

template <class V>
struct QuadResult {
  V value{};
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Kronrod abscissae on [0, 1]; odd indices are the Gauss nodes.
inline constexpr std::array<double, 8> gk15_x{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_wk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct panel {
  double a, b;
  V value;
  double error;
  bool operator<(const panel& o) const { return error < o.error; }
};

template <class V, class F>
panel<V> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  V k = gk15_wk[7] * f(c);
  V g = gk15_wg[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const V s = f(c - h * gk15_x[i]) + f(c + h * gk15_x[i]);
    k += gk15_wk[i] * s;
    if (i % 2 == 1) g += gk15_wg[i / 2] * s;
  }
  return {a, b, h * k, std::abs(h * (k - g))};
}

}  // namespace detail

// Integrates f over [a, b]; throws quadrature_non_convergence when the
// evaluation budget runs out before the tolerance is met.
template <class V, class F>
QuadResult<V> integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  using detail::panel;
  std::priority_queue<panel<V>> work;
  QuadResult<V> out;
  const int n0 = std::max(1, opt.initial_panels);
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0;
    const double hi = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
    work.push(detail::gk15<V>(f, lo, hi));
    out.evaluations += 15;
  }
  auto totals = [&] {
    V v{};
    double e = 0.0;
    auto copy = work;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };

  // Running sums are refreshed exactly every so often to limit drift.
  auto [value, error] = totals();
  std::size_t since_refresh = 0;
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
    if (out.evaluations + 30 > opt.max_evaluations)
      throw quadrature_non_convergence("integrate: error estimate " + std::to_string(error) +
                                       " above tolerance after " +
                                       std::to_string(out.evaluations) + " evaluations");
    const panel<V> worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gk15<V>(f, worst.a, mid);
    const auto right = detail::gk15<V>(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    if (++since_refresh == 256) {
      std::tie(value, error) = totals();
      since_refresh = 0;
    }
  }
  std::tie(out.value, out.error) = totals();
  return out;
}

}  // namespace rsconv
