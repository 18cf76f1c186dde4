#pragma once

// Normalized Satake data at a single prime.
//
// The spinor Euler factor is Z_p(X) = prod_i (1 - beta_i X)^{-1} with X = p^-s,
// and D_1 = zeta(2s+1)^{-1} Z gives the local series
//
//   D_{1,p}(X) = (1 - X^2/p) * prod_i (1 - beta_i X)^{-1}.
//
// Expanding prod (1 - beta_i X)^{-1} = 1 + e1 X + (e1^2 - e2) X^2 + ... and
// matching the X and X^2 coefficients against lambda_p, lambda_{p^2}:
//
//   e1 = lambda_p,   e2 = lambda_p^2 - lambda_{p^2} - 1/p.
//
// The normalized parameters are unitary and closed under inversion
// ({beta} = {1/beta}), which forces e3 = e1 * e4 and e4 = 1. Recovery imposes
// that structure: the betas are the roots of the palindromic quartic
// 1 - e1 X + e2 X^2 - e1 X^3 + X^4 (roots of the reversed polynomial are the
// inverses, the same multiset). With y = X + 1/X it reduces to
// y^2 - e1 y + (e2 - 2) = 0 and X^2 - y X + 1 = 0; unitary roots correspond to
// real y in [-2, 2].

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rsconv/arith.hpp"
#include "rsconv/errors.hpp"

namespace rsconv {

using cplx = std::complex<double>;
using beta_array = std::array<cplx, 4>;

enum class satake_source { recovered, synthetic, ingested };

inline const char* to_string(satake_source s) {
  switch (s) {
    case satake_source::recovered: return "recovered";
    case satake_source::synthetic: return "synthetic";
    case satake_source::ingested: return "ingested";
  }
  return "?";
}

struct SatakeLocal {
  prime_t p = 2;
  beta_array betas{cplx(1), cplx(1), cplx(1), cplx(1)};
  satake_source source = satake_source::synthetic;
};

struct HeckePair {
  prime_t p = 2;
  double lambda_p = 0.0;
  double lambda_p2 = 0.0;

  friend bool operator==(const HeckePair&, const HeckePair&) = default;
};

struct RecoveryOptions {
  double tau_unit = 1e-9;
  double warn_limit = 1e-3;
};

struct ValidationReport {
  double max_modulus_defect = 0.0;
  double inversion_defect = 0.0;
  double symmetric_defect = 0.0;  // max of |e1-e3|, |Im e1|, |Im e3|, |e4-1|
  double tau = 1e-9;
  bool pass = true;
};

// Elementary symmetric functions e0..e4 of the four parameters.
inline std::array<cplx, 5> elementary_symmetric(const beta_array& b) {
  std::array<cplx, 5> e{cplx(1), cplx(0), cplx(0), cplx(0), cplx(0)};
  for (const cplx& x : b)
    for (int k = 4; k >= 1; --k) e[k] += e[k - 1] * x;
  return e;
}

// min over permutations of max_i |a_i - b_pi(i)|.
inline double permutation_distance(const beta_array& a, const beta_array& b) {
  std::array<int, 4> idx{0, 1, 2, 3};
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[idx[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

inline SatakeLocal synthetic_satake(prime_t p, double a, double b) {
  const cplx b1 = std::polar(1.0, a);
  const cplx b2 = std::polar(1.0, a + b);
  return {p, {b1, b2, std::conj(b2), std::conj(b1)}, satake_source::synthetic};
}

// lambda_p and lambda_{p^2} of a Satake point (real parts; the imaginary parts
// vanish for conjugation-closed parameters).
inline HeckePair hecke_from(const SatakeLocal& s) {
  const auto e = elementary_symmetric(s.betas);
  const double inv_p = 1.0 / static_cast<double>(s.p);
  return {s.p, e[1].real(), (e[1] * e[1] - e[2]).real() - inv_p};
}

// Imaginary residue of the lambdas computed from s (zero for genuine data).
inline double hecke_imaginary_defect(const SatakeLocal& s) {
  const auto e = elementary_symmetric(s.betas);
  return std::max(std::abs(e[1].imag()), std::abs((e[1] * e[1] - e[2]).imag()));
}

inline ValidationReport validate_ramanujan(const SatakeLocal& s, double tau_unit = 1e-9) {
  ValidationReport r;
  r.tau = tau_unit;
  for (const cplx& b : s.betas)
    r.max_modulus_defect = std::max(r.max_modulus_defect, std::abs(std::abs(b) - 1.0));

  beta_array inv;
  bool finite = true;
  for (int i = 0; i < 4; ++i) {
    finite = finite && std::isfinite(s.betas[i].real()) && std::isfinite(s.betas[i].imag());
    inv[i] = s.betas[i] == cplx(0) ? cplx(std::numeric_limits<double>::infinity()) : 1.0 / s.betas[i];
  }
  r.inversion_defect = permutation_distance(s.betas, inv);

  const auto e = elementary_symmetric(s.betas);
  r.symmetric_defect = std::max({std::abs(e[1] - e[3]), std::abs(e[1].imag()),
                                 std::abs(e[3].imag()), std::abs(e[4] - 1.0)});
  r.pass = finite && r.max_modulus_defect <= tau_unit && r.inversion_defect <= tau_unit &&
           r.symmetric_defect <= tau_unit;
  return r;
}

namespace detail {

// Roots of X^2 - y X + 1, ordered (root with Im >= 0 first, its inverse second).
inline std::array<cplx, 2> reciprocal_pair(cplx y) {
  // y within rounding noise of +-2 is a double root at +-1.
  constexpr double snap = 1e-14;
  if (std::abs(y.imag()) == 0.0 && std::abs(y.real()) <= 2.0 + snap) {
    double c = std::clamp(y.real() / 2.0, -1.0, 1.0);
    if (1.0 - std::abs(c) <= snap / 2.0) c = std::copysign(1.0, c);
    const double sn = std::sqrt((1.0 - c) * (1.0 + c));
    return {cplx(c, sn), cplx(c, -sn)};
  }
  const cplx root = std::sqrt(y * y - 4.0);
  // Pick the sign that avoids cancellation, then use r1 r2 = 1.
  const cplx r1 = (std::real(std::conj(y) * root) >= 0.0 ? y + root : y - root) / 2.0;
  const cplx r2 = 1.0 / r1;
  return r1.imag() >= 0.0 ? std::array<cplx, 2>{r1, r2} : std::array<cplx, 2>{r2, r1};
}

}  // namespace detail

inline SatakeLocal recover_satake(const HeckePair& pair, const RecoveryOptions& opts = {},
                                  std::vector<std::string>* warnings = nullptr) {
  if (!std::isfinite(pair.lambda_p) || !std::isfinite(pair.lambda_p2))
    throw quartic_solve_failure("recover_satake: non-finite eigenvalue data at p=" +
                                std::to_string(pair.p));
  if (!is_prime(pair.p))
    throw parameter_domain("recover_satake: " + std::to_string(pair.p) + " is not prime");

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double e1 = pair.lambda_p;
  const double e2 = e1 * e1 - pair.lambda_p2 - 1.0 / static_cast<double>(pair.p);

  // y^2 - e1 y + (e2 - 2) = 0; discriminant (y1 - y2)^2.
  double disc = e1 * e1 - 4.0 * e2 + 8.0;
  const double noise = 64.0 * eps * (e1 * e1 + 4.0 * std::abs(e2) + 8.0);
  if (std::abs(disc) <= noise) disc = 0.0;

  std::array<cplx, 2> ys;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double y1 = 0.5 * (e1 + std::copysign(sq, e1));
    const double y2 = y1 != 0.0 ? (e2 - 2.0) / y1 : 0.5 * (e1 - std::copysign(sq, e1));
    ys = {cplx(y1), cplx(y2)};
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    ys = {cplx(0.5 * e1, im), cplx(0.5 * e1, -im)};
  }

  const auto first = detail::reciprocal_pair(ys[0]);
  const auto second = detail::reciprocal_pair(ys[1]);
  SatakeLocal out{pair.p, {first[0], second[0], second[1], first[1]}, satake_source::recovered};

  std::vector<double> moduli;
  double defect = 0.0;
  for (const cplx& b : out.betas) {
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag()))
      throw quartic_solve_failure("recover_satake: non-finite root at p=" +
                                  std::to_string(pair.p));
    moduli.push_back(std::abs(b));
    defect = std::max(defect, std::abs(std::abs(b) - 1.0));
  }
  if (defect > opts.warn_limit) throw roots_off_unit_circle(pair.p, moduli);
  if (defect > opts.tau_unit && warnings) {
    warnings->push_back("p=" + std::to_string(pair.p) + ": Satake modulus defect " +
                        std::to_string(defect) + " exceeds tau_unit");
  }
  return out;
}

// Angles (theta_1, theta_2) in [0, pi] of a unitary point, i.e. betas
// e^{+-i theta_1}, e^{+-i theta_2}.
inline std::array<double, 2> satake_angles(const SatakeLocal& s) {
  std::array<double, 4> args;
  for (int i = 0; i < 4; ++i) args[i] = std::abs(std::arg(s.betas[i]));
  std::sort(args.begin(), args.end());
  return {0.5 * (args[0] + args[1]), 0.5 * (args[2] + args[3])};
}

}  // namespace rsconv
