#pragma once

// Partial-sum experiments on coefficient tables: the residue constant of D2,
// convergence of the H(1) product, and counts of n with small or large |lambda_n|.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "rsconv/dirichlet.hpp"
#include "rsconv/errors.hpp"
#include "rsconv/model.hpp"

namespace rsconv {

struct CFEstimate {
  std::uint64_t x_lo = 0, x_hi = 0;
  double slope = 0.0;          // least squares A(x) ~ slope x through the origin
  double fit_residual = 0.0;   // rms(A(x) - slope x) / (slope x_hi)
  double min_ratio = 0.0;      // min A(x)/x over the window
  double max_ratio = 0.0;
  double h_at_one = 0.0;
  double l_residue = 0.0;
  double model_residue = 0.0;  // h_at_one * l_residue
  double ratio = 0.0;          // slope / model_residue
};

// Fits A(n) = sum_{m<=n} a_m against n over integers n in [N/10, N].
inline CFEstimate estimate_cF(const CoefficientTable& d2, double h_at_one, double l_residue) {
  if (d2.N < 1000)
    throw insufficient_data("estimate_cF: need N >= 1000, table has N = " + std::to_string(d2.N));
  const auto A = prefix_sums(d2);
  CFEstimate r;
  r.x_lo = d2.N / 10;
  r.x_hi = d2.N;
  long double sxa = 0.0L, sxx = 0.0L;
  for (std::uint64_t n = r.x_lo; n <= r.x_hi; ++n) {
    const long double x = static_cast<long double>(n);
    sxa += x * A[n];
    sxx += x * x;
  }
  r.slope = static_cast<double>(sxa / sxx);
  long double ss = 0.0L;
  r.min_ratio = r.max_ratio = A[r.x_lo] / static_cast<double>(r.x_lo);
  for (std::uint64_t n = r.x_lo; n <= r.x_hi; ++n) {
    const double x = static_cast<double>(n);
    const double dev = A[n] - r.slope * x;
    ss += static_cast<long double>(dev) * dev;
    r.min_ratio = std::min(r.min_ratio, A[n] / x);
    r.max_ratio = std::max(r.max_ratio, A[n] / x);
  }
  const double rms = std::sqrt(static_cast<double>(ss / static_cast<long double>(r.x_hi - r.x_lo + 1)));
  r.fit_residual = rms / (std::abs(r.slope) * static_cast<double>(r.x_hi));
  r.h_at_one = h_at_one;
  r.l_residue = l_residue;
  r.model_residue = h_at_one * l_residue;
  r.ratio = r.slope / r.model_residue;
  return r;
}

inline CFEstimate estimate_cF(const CoefficientTable& d2, const EulerModel& model) {
  return estimate_cF(d2, model.h_at_one(), model.residue(series_kind::l));
}

struct CauchyStep {
  prime_t P = 0;
  double product = 0.0;     // prod_{p<=P} H_p(1/p)
  double difference = 0.0;  // |product - product at the previous checkpoint|
};

// Partial products of H(1) at the given cutoffs (each clipped to the model's primes).
inline std::vector<CauchyStep> h_product_convergence(const EulerModel& model,
                                                     const std::vector<prime_t>& cutoffs) {
  const auto partial = model.h_partial_products();
  const auto& locs = model.locals();
  std::vector<CauchyStep> out;
  double prev = 1.0;
  for (prime_t P : cutoffs) {
    const auto it = std::upper_bound(locs.begin(), locs.end(), P,
                                     [](prime_t q, const SatakeLocal& s) { return q < s.p; });
    const std::size_t count = static_cast<std::size_t>(it - locs.begin());
    const double v = count == 0 ? 1.0 : partial[count - 1];
    out.push_back({P, v, out.empty() ? 0.0 : std::abs(v - prev)});
    prev = v;
  }
  return out;
}

struct DensityReport {
  std::uint64_t X = 0;
  std::string predicate;
  std::uint64_t count = 0;
  double density = 0.0;
};

namespace detail {

inline void require_cutoff(const CoefficientTable& t, std::uint64_t X) {
  if (X < 1) throw parameter_domain("density: X must be >= 1");
  if (X > t.N)
    throw truncation_exceeded("density: X = " + std::to_string(X) + " exceeds table size " +
                              std::to_string(t.N));
}

// d(n) for n <= X.
inline std::vector<std::uint32_t> divisor_counts(std::uint64_t X) {
  std::vector<std::uint32_t> d(X + 1, 0);
  for (std::uint64_t a = 1; a <= X; ++a)
    for (std::uint64_t m = a; m <= X; m += a) ++d[m];
  return d;
}

template <class Pred>
DensityReport count_where(const CoefficientTable& t, std::uint64_t X, std::string name, Pred pred) {
  require_cutoff(t, X);
  DensityReport r{X, std::move(name), 0, 0.0};
  for (std::uint64_t n = 1; n <= X; ++n)
    if (pred(n, std::abs(t.coeffs[n]))) ++r.count;
  r.density = static_cast<double>(r.count) / static_cast<double>(X);
  return r;
}

}  // namespace detail

// n <= X with |lambda_n| <= sqrt(d(n)); t is the lambda (D1) table.
inline DensityReport density_sqrt_d(const CoefficientTable& t, std::uint64_t X) {
  detail::require_cutoff(t, X);
  const auto d = detail::divisor_counts(X);
  return detail::count_where(t, X, "abs_lambda_le_sqrt_d", [&](std::uint64_t n, double a) {
    return a <= std::sqrt(static_cast<double>(d[n]));
  });
}

// n <= X with |lambda_n| <= sqrt(log n).
inline DensityReport density_sqrt_log(const CoefficientTable& t, std::uint64_t X) {
  return detail::count_where(t, X, "abs_lambda_le_sqrt_log", [](std::uint64_t n, double a) {
    return a <= std::sqrt(std::log(static_cast<double>(n)));
  });
}

inline DensityReport bounded_away_count(const CoefficientTable& t, std::uint64_t X,
                                        double alpha = 1.0 / 16.0) {
  return detail::count_where(t, X, "abs_lambda_ge_alpha",
                             [alpha](std::uint64_t, double a) { return a >= alpha; });
}

// Gaps between consecutive n with |a_n| > zero_tol.
struct ZeroGapReport {
  std::uint64_t N = 0;
  std::uint64_t zero_count = 0;
  std::uint64_t max_gap = 0;    // largest m - n between consecutive nonzero terms
  std::uint64_t gap_start = 0;  // the n where it starts
  double zero_tol = 1e-12;
};

inline ZeroGapReport zero_gaps(const CoefficientTable& t, double zero_tol = 1e-12) {
  ZeroGapReport r;
  r.N = t.N;
  r.zero_tol = zero_tol;
  std::uint64_t last = 0;
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    if (std::abs(t.coeffs[n]) <= zero_tol) {
      ++r.zero_count;
      continue;
    }
    if (last != 0 && n - last > r.max_gap) {
      r.max_gap = n - last;
      r.gap_start = last;
    }
    last = n;
  }
  return r;
}

// Roughly log-spaced integer grid of about `points` values in [1, N].
inline std::vector<std::uint64_t> log_grid(std::uint64_t N, int points) {
  std::vector<std::uint64_t> out;
  if (N < 1 || points < 1) return out;
  const double step = std::log(static_cast<double>(N)) / std::max(1, points - 1);
  for (int i = 0; i < points; ++i) {
    auto x = static_cast<std::uint64_t>(std::llround(std::exp(step * i)));
    x = std::clamp<std::uint64_t>(x, 1, N);
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  if (out.back() != N) out.push_back(N);
  return out;
}

// Rows: x,A(x),A(x)/x
inline void write_ratio_csv(std::ostream& os, const CoefficientTable& t,
                            const std::vector<std::uint64_t>& xs) {
  const auto A = prefix_sums(t);
  os << "x,A(x),A(x)/x\r\n";
  char buf[96];
  for (std::uint64_t x : xs) {
    if (x < 1 || x > t.N) throw truncation_exceeded("write_ratio_csv: x outside the table");
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\r\n", static_cast<unsigned long long>(x), A[x],
                  A[x] / static_cast<double>(x));
    os << buf;
  }
}

}  // namespace rsconv
