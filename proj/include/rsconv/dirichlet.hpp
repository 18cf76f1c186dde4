#pragma once

// Global Dirichlet coefficients expanded multiplicatively from local factors,
// plus truncated evaluation with a rigorous tail bound.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "rsconv/arith.hpp"
#include "rsconv/errors.hpp"
#include "rsconv/local_factors.hpp"
#include "rsconv/special.hpp"

namespace rsconv {

// M(sigma) >= sum_{n>=1} |a_n| n^-sigma for the infinite series the table
// truncates.
using majorant_fn = std::function<double(double)>;

struct CoefficientTable {
  std::string name;
  std::uint64_t N = 0;
  std::vector<double> coeffs;  // coeffs[n] = a_n, coeffs[0] unused
  std::vector<prime_t> prime_set;
  majorant_fn majorant;

  double operator[](std::uint64_t n) const { return coeffs.at(n); }
};

// Largest e with p^e <= N.
inline int max_exponent(prime_t p, std::uint64_t N) {
  int e = 0;
  for (std::uint64_t q = p; q <= N; q *= p) {
    ++e;
    if (q > N / p) break;
  }
  return e;
}

inline CoefficientTable expand_coefficients(const std::map<prime_t, LocalFactor>& locals,
                                            std::uint64_t N, std::string name = "") {
  if (N < 1) throw parameter_domain("expand_coefficients: N must be >= 1");
  CoefficientTable t;
  t.name = std::move(name);
  t.N = N;
  t.coeffs.assign(N + 1, 0.0);
  t.coeffs[1] = 1.0;
  if (N == 1) return t;

  const prime_sieve sieve(N);
  // Real parts of the local coefficients, indexed by prime then exponent.
  std::vector<std::vector<double>> local(N + 1);
  for (prime_t p : sieve.primes()) {
    const auto it = locals.find(p);
    if (it == locals.end()) throw missing_prime(p);
    const LocalFactor& f = it->second;
    const int need = max_exponent(p, N);
    if (f.known_order() < need)
      throw insufficient_order("local factor " + std::string(to_string(f.role)) + " at p=" +
                               std::to_string(p) + " has order " +
                               std::to_string(f.known_order()) + ", need " + std::to_string(need));
    auto& row = local[p];
    row.resize(need + 1);
    for (int e = 0; e <= need; ++e) {
      const cplx c = f.coefficient(e);
      if (std::abs(c.imag()) > 1e-8 * std::max(1.0, std::abs(c.real())))
        throw parameter_domain("expand_coefficients: coefficient X^" + std::to_string(e) +
                               " at p=" + std::to_string(p) + " is not real");
      row[e] = c.real();
    }
    t.prime_set.push_back(p);
  }

  for (std::uint64_t n = 2; n <= N; ++n) {
    const auto [pp, m] = sieve.split(n);
    t.coeffs[n] = local[pp.p][pp.e] * t.coeffs[m];
  }
  return t;
}

// Majorant zeta(sigma)^m, valid for tables with |a_n| <= d_m(n).
inline majorant_fn zeta_power_majorant(int m) {
  return [m](double sigma) { return std::pow(zeta_upper(sigma), m); };
}

struct SeriesValue {
  cplx value;
  double tail_bound = 0.0;
};

inline SeriesValue eval_series(const CoefficientTable& t, cplx s, double margin = 0.1) {
  const double sigma = s.real();
  if (!(sigma >= 1.0 + margin))
    throw outside_convergence("eval_series: Re(s) = " + std::to_string(sigma) +
                              " is left of 1 + " + std::to_string(margin));
  if (!t.majorant) throw parameter_domain("eval_series: table " + t.name + " has no majorant");

  long double re = 0.0L, im = 0.0L, absum = 0.0L;
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    const double a = t.coeffs[n];
    if (a == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    const double mag = a * std::exp(-sigma * ln);
    re += mag * std::cos(s.imag() * ln);
    im -= mag * std::sin(s.imag() * ln);
    absum += std::abs(mag);
  }
  const double M = t.majorant(sigma);
  // The majorant is a product over many primes; allow for its rounding.
  const double tail = std::max(0.0, M - static_cast<double>(absum)) + 1e-10 * M;
  return {cplx(static_cast<double>(re), static_cast<double>(im)), tail};
}

inline double partial_sum(const CoefficientTable& t, double x) {
  if (x < 1.0) return 0.0;
  const double fx = std::floor(x);
  if (fx > static_cast<double>(t.N))
    throw truncation_exceeded("partial_sum: x = " + std::to_string(x) + " exceeds table size " +
                              std::to_string(t.N));
  long double acc = 0.0L;
  for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(fx); ++n) acc += t.coeffs[n];
  return static_cast<double>(acc);
}

// A[n] = a_1 + ... + a_n.
inline std::vector<double> prefix_sums(const CoefficientTable& t) {
  std::vector<double> out(t.N + 1, 0.0);
  long double acc = 0.0L;
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    acc += t.coeffs[n];
    out[n] = static_cast<double>(acc);
  }
  return out;
}

// (a * b)_n = sum_{d | n} a_d b_{n/d} for n <= N.
inline std::vector<double> dirichlet_convolution(const CoefficientTable& a,
                                                 const CoefficientTable& b, std::uint64_t N) {
  if (N > a.N || N > b.N) throw truncation_exceeded("dirichlet_convolution: N beyond tables");
  std::vector<long double> acc(N + 1, 0.0L);
  for (std::uint64_t d = 1; d <= N; ++d) {
    if (a.coeffs[d] == 0.0) continue;
    for (std::uint64_t m = 1; d * m <= N; ++m) acc[d * m] += a.coeffs[d] * b.coeffs[m];
  }
  return {acc.begin(), acc.end()};
}

// Worst |a_mn - a_m a_n| / max(1, |a_m a_n|) over coprime m, n >= 2 with mn <= limit.
inline double multiplicativity_defect(const CoefficientTable& t, std::uint64_t limit) {
  limit = std::min(limit, t.N);
  double worst = 0.0;
  for (std::uint64_t m = 2; m * 2 <= limit; ++m)
    for (std::uint64_t n = 2; m * n <= limit; ++n) {
      if (std::gcd(m, n) != 1) continue;
      const double prod = t.coeffs[m] * t.coeffs[n];
      worst = std::max(worst, std::abs(t.coeffs[m * n] - prod) / std::max(1.0, std::abs(prod)));
    }
  return worst;
}

// Header row (name, N, primes), then n,a_n rows.
inline void write_csv(std::ostream& os, const CoefficientTable& t) {
  os << "name,N,primes\r\n" << t.name << ',' << t.N << ",\"";
  for (std::size_t i = 0; i < t.prime_set.size(); ++i) os << (i ? " " : "") << t.prime_set[i];
  os << "\"\r\nn,a_n\r\n";
  char buf[64];
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coeffs[n]);
    os << n << ',' << buf << "\r\n";
  }
}

}  // namespace rsconv
