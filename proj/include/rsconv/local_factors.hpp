#pragma once

// Local Euler factors in X = p^-s built from a Satake point.
//
//   SpinorInv   prod_i (1 - beta_i X)                 degree 4
//   D1Series    (1 - X^2/p) prod_i (1 - beta_i X)^-1  coefficients lambda_{p^d}
//   RankinInv   prod_{i,j} (1 - beta_i beta_j X)      degree 16, 16 ordered pairs
//   D2Series    sum_d lambda_{p^d}^2 X^d
//   HPoly       RankinInv * D2Series                  degree <= 15, no X term
//
// plus the reciprocal series SpinorSeries (= Z_p) and RankinSeries (= L_p) used
// to expand the Z and L tables.
//
// The series are computed by recurrence and truncated multiplication; partial
// fractions are never used (they break down when the betas coincide). The
// D1 -> D2 -> H pipeline runs in __float128: the degree 16..32 coefficients of
// RankinInv * D2Series cancel from terms as large as ~1e11 at the all-ones
// point, and double precision leaves ~1e-5 of noise there.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "rsconv/errors.hpp"
#include "rsconv/poly.hpp"
#include "rsconv/satake.hpp"

namespace rsconv {

enum class local_role {
  spinor_inverse,
  d1_series,
  rankin_inverse,
  d2_series,
  h_poly,
  spinor_series,
  rankin_series,
};

inline const char* to_string(local_role r) {
  switch (r) {
    case local_role::spinor_inverse: return "SpinorInv";
    case local_role::d1_series: return "D1Series";
    case local_role::rankin_inverse: return "RankinInv";
    case local_role::d2_series: return "D2Series";
    case local_role::h_poly: return "HPoly";
    case local_role::spinor_series: return "SpinorSeries";
    case local_role::rankin_series: return "RankinSeries";
  }
  return "?";
}

enum class factor_kind { polynomial, truncated_series };

struct LocalFactor {
  prime_t p = 2;
  local_role role = local_role::spinor_inverse;
  factor_kind kind = factor_kind::polynomial;
  std::vector<cplx> coeffs;

  // Highest exponent whose coefficient is known: the truncation order of a
  // series, or +inf (as INT_MAX) for a polynomial.
  int known_order() const {
    return kind == factor_kind::polynomial ? std::numeric_limits<int>::max()
                                           : static_cast<int>(coeffs.size()) - 1;
  }

  cplx coefficient(int e) const {
    if (e < 0) return cplx(0.0);
    if (e < static_cast<int>(coeffs.size())) return coeffs[e];
    if (kind == factor_kind::polynomial) return cplx(0.0);
    throw insufficient_order("local factor " + std::string(to_string(role)) + " at p=" +
                             std::to_string(p) + " known only to order " +
                             std::to_string(coeffs.size() - 1) + ", X^" + std::to_string(e) +
                             " requested");
  }

  cplx evaluate(cplx x) const { return poly_eval(coeffs, x); }

  double max_imaginary() const {
    double m = 0.0;
    for (const cplx& c : coeffs) m = std::max(m, std::abs(c.imag()));
    return m;
  }
};

namespace detail {

using wvec = std::vector<wcplx>;

inline std::vector<cplx> narrow(const wvec& v) {
  std::vector<cplx> out;
  out.reserve(v.size());
  for (const wcplx& z : v) out.push_back(z.narrow());
  return out;
}

inline std::array<wcplx, 4> widen(const beta_array& b) {
  return {wcplx(b[0]), wcplx(b[1]), wcplx(b[2]), wcplx(b[3])};
}

inline wvec spinor_inverse_wide(const SatakeLocal& s) {
  const auto b = widen(s.betas);
  return poly_from_inverse_roots(std::span<const wcplx>(b));
}

inline wvec rankin_inverse_wide(const SatakeLocal& s) {
  const auto b = widen(s.betas);
  std::vector<wcplx> pairs;
  pairs.reserve(16);
  for (const auto& bi : b)
    for (const auto& bj : b) pairs.push_back(bi * bj);
  return poly_from_inverse_roots(std::span<const wcplx>(pairs));
}

inline wvec d1_wide(const SatakeLocal& s, int order) {
  wvec u = series_reciprocal_monic(spinor_inverse_wide(s), order);
  const wide inv_p = wide(1) / static_cast<wide>(s.p);
  for (int n = order; n >= 2; --n) u[n] -= u[n - 2] * wcplx(inv_p);
  return u;
}

inline wvec d2_wide(const SatakeLocal& s, int order) {
  wvec d = d1_wide(s, order);
  for (auto& c : d) c = c * c;
  return d;
}

inline void require_order(int order) {
  if (order < 0) throw std::invalid_argument("local factor order must be >= 0");
}

}  // namespace detail

inline LocalFactor spinor_inverse(const SatakeLocal& s) {
  return {s.p, local_role::spinor_inverse, factor_kind::polynomial,
          detail::narrow(detail::spinor_inverse_wide(s))};
}

inline LocalFactor rankin_inverse(const SatakeLocal& s) {
  return {s.p, local_role::rankin_inverse, factor_kind::polynomial,
          detail::narrow(detail::rankin_inverse_wide(s))};
}

inline LocalFactor d1_local(const SatakeLocal& s, int order) {
  detail::require_order(order);
  return {s.p, local_role::d1_series, factor_kind::truncated_series,
          detail::narrow(detail::d1_wide(s, order))};
}

inline LocalFactor d2_local(const SatakeLocal& s, int order) {
  detail::require_order(order);
  return {s.p, local_role::d2_series, factor_kind::truncated_series,
          detail::narrow(detail::d2_wide(s, order))};
}

inline LocalFactor spinor_series(const SatakeLocal& s, int order) {
  detail::require_order(order);
  return {s.p, local_role::spinor_series, factor_kind::truncated_series,
          detail::narrow(series_reciprocal_monic(detail::spinor_inverse_wide(s), order))};
}

inline LocalFactor rankin_series(const SatakeLocal& s, int order) {
  detail::require_order(order);
  return {s.p, local_role::rankin_series, factor_kind::truncated_series,
          detail::narrow(series_reciprocal_monic(detail::rankin_inverse_wide(s), order))};
}

inline constexpr int h_check_order = 32;
inline constexpr int h_max_degree = 15;

struct HConstruction {
  LocalFactor h;             // coefficients 0..15
  double tail_defect = 0.0;  // max |coefficient| over degrees 16..32 of the product
  int tail_worst_degree = 16;
  double linear_defect = 0.0;  // |h_1|
  int observed_degree = 0;     // highest degree with |h_n| > tau
};

// Builds H_p = RankinInv * D2Series and reports the polynomiality defects
// without throwing.
inline HConstruction h_construct(const SatakeLocal& s, double tau_poly = 1e-9) {
  using namespace detail;
  const wvec d2 = d2_wide(s, h_check_order);
  const wvec r = rankin_inverse_wide(s);
  const wvec prod = series_multiply(d2, r, h_check_order + 1);

  HConstruction out;
  for (int n = h_max_degree + 1; n <= h_check_order; ++n) {
    const double m = magnitude(prod[n]);
    if (n == h_max_degree + 1 || m > out.tail_defect) {
      out.tail_defect = m;
      out.tail_worst_degree = n;
    }
  }
  wvec head(prod.begin(), prod.begin() + h_max_degree + 1);
  out.h = {s.p, local_role::h_poly, factor_kind::polynomial, narrow(head)};
  out.linear_defect = std::abs(out.h.coeffs[1]);
  for (int n = h_max_degree; n >= 0; --n) {
    if (std::abs(out.h.coeffs[n]) > tau_poly) {
      out.observed_degree = n;
      break;
    }
  }
  return out;
}

inline LocalFactor h_local(const SatakeLocal& s, double tau_poly = 1e-9) {
  HConstruction c = h_construct(s, tau_poly);
  if (c.tail_defect > tau_poly)
    throw polynomiality_violation(s.p, c.tail_worst_degree, c.tail_defect);
  if (c.linear_defect > tau_poly) throw polynomiality_violation(s.p, 1, c.linear_defect);
  return std::move(c.h);
}

// H_p(1/p): the local contribution to H(1).
inline cplx h_value_at_one(const SatakeLocal& s, double tau_poly = 1e-9) {
  return h_local(s, tau_poly).evaluate(cplx(1.0 / static_cast<double>(s.p), 0.0));
}

// Upper bound on |lambda_{p^d}| forced by unitary parameters:
// C(d+3,3) + C(d+1,3)/p.
inline double lambda_power_bound(prime_t p, int d) {
  return binomial(d + 3, 3) + binomial(d + 1, 3) / static_cast<double>(p);
}

}  // namespace rsconv
