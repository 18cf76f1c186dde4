#pragma once

// Finite-prime Euler model.
//
// Primes p <= P carry Satake data. Every prime p > P carries the local factor
// of zeta: D1_p = D2_p = L_p = 1/(1 - X), H_p = 1, Z_p = 1/((1 - X)(1 - X^2/p)).
// So, with X = p^-s and products over p <= P,
//
//   L(s)  = zeta(s)            prod (1 - X) / R_p(X)
//   D2(s) = zeta(s)            prod (1 - X) H_p(X) / R_p(X)     = H(s) L(s)
//   D1(s) = zeta(s)            prod (1 - X)(1 - X^2/p) / S_p(X)
//   Z(s)  = zeta(s) zeta(2s+1) prod (1 - X)(1 - X^2/p) / S_p(X)  = zeta(2s+1) D1(s)
//   H(s)  =                    prod H_p(X)
//
// with S_p the spinor and R_p the Rankin polynomial. L, D1, D2 and Z have a
// simple pole at s = 1 and are otherwise analytic for Re(s) > 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rsconv/arith.hpp"
#include "rsconv/dirichlet.hpp"
#include "rsconv/errors.hpp"
#include "rsconv/local_factors.hpp"
#include "rsconv/satake.hpp"
#include "rsconv/special.hpp"

namespace rsconv {

enum class series_kind { d1, d2, z, l, h };

inline const char* to_string(series_kind k) {
  switch (k) {
    case series_kind::d1: return "D1";
    case series_kind::d2: return "D2";
    case series_kind::z: return "Z";
    case series_kind::l: return "L";
    case series_kind::h: return "H";
  }
  return "?";
}

namespace detail {

// Coefficient bound for the local series of each kind, valid for unitary data.
inline double local_coeff_bound(series_kind k, prime_t p, int e) {
  switch (k) {
    case series_kind::d1: return lambda_power_bound(p, e);
    case series_kind::d2: return lambda_power_bound(p, e) * lambda_power_bound(p, e);
    case series_kind::z: return binomial(e + 3, 3);
    case series_kind::l: return binomial(e + 15, 15);
    case series_kind::h: return 0.0;
  }
  return 0.0;
}

// sum_{e > K} bound(e) y^e for a bound with eventually decreasing ratios.
inline double local_remainder(series_kind k, prime_t p, int K, double y) {
  if (k == series_kind::h) return 0.0;
  double acc = 0.0;
  double term = local_coeff_bound(k, p, K + 1) * std::pow(y, K + 1);
  for (int e = K + 1; e < 100000; ++e) {
    acc += term;
    const double next = local_coeff_bound(k, p, e + 1) * std::pow(y, e + 1);
    const double ratio = next / term;
    // Ratios bound(e+1)/bound(e) decrease in e, so the rest is geometric.
    if (ratio < 1.0 && next < 1e-18 * acc) return acc + next / (1.0 - ratio);
    term = next;
  }
  return acc;
}

}  // namespace detail

class EulerModel {
 public:
  static constexpr int majorant_order = 40;

  // locals must cover every prime up to the largest one given.
  explicit EulerModel(std::vector<SatakeLocal> locals, double tau_poly = 1e-9)
      : locals_(std::move(locals)) {
    std::sort(locals_.begin(), locals_.end(),
              [](const SatakeLocal& a, const SatakeLocal& b) { return a.p < b.p; });
    if (locals_.empty()) throw insufficient_data("EulerModel: no primes");
    P_ = locals_.back().p;
    const auto primes = primes_up_to(P_);
    if (primes.size() != locals_.size()) {
      for (std::size_t i = 0; i < primes.size(); ++i)
        if (i >= locals_.size() || locals_[i].p != primes[i]) {
          if (i < locals_.size() && i > 0 && locals_[i].p == locals_[i - 1].p)
            throw duplicate_prime(locals_[i].p);
          throw gap_in_primes(primes[i]);
        }
    }
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (locals_[i].p != primes[i]) throw gap_in_primes(primes[i]);
      spinor_.push_back(spinor_inverse(locals_[i]).coeffs);
      rankin_.push_back(rankin_inverse(locals_[i]).coeffs);
      h_.push_back(h_local(locals_[i], tau_poly).coeffs);
    }
  }

  prime_t max_prime() const { return P_; }
  const std::vector<SatakeLocal>& locals() const { return locals_; }
  const std::vector<std::vector<cplx>>& h_polys() const { return h_; }

  // Local factor of the given kind at any prime, data or tail.
  LocalFactor local(series_kind k, prime_t p, int order) const {
    if (p <= P_) {
      const SatakeLocal& s = locals_[index_of(p)];
      switch (k) {
        case series_kind::d1: return d1_local(s, order);
        case series_kind::d2: return d2_local(s, order);
        case series_kind::z: return spinor_series(s, order);
        case series_kind::l: return rankin_series(s, order);
        case series_kind::h:
          return {p, local_role::h_poly, factor_kind::polynomial, h_[index_of(p)]};
      }
    }
    if (k == series_kind::h) return {p, local_role::h_poly, factor_kind::polynomial, {cplx(1)}};
    std::vector<cplx> c(order + 1, cplx(1));
    if (k == series_kind::z) {
      // 1/((1-X)(1-X^2/p)): c_e = sum_{j <= e/2} p^-j
      const double inv_p = 1.0 / static_cast<double>(p);
      for (int e = 2; e <= order; ++e) c[e] = c[e - 2] * inv_p + 1.0;
    }
    const local_role role = k == series_kind::d1   ? local_role::d1_series
                            : k == series_kind::d2 ? local_role::d2_series
                            : k == series_kind::z  ? local_role::spinor_series
                                                   : local_role::rankin_series;
    return {p, role, factor_kind::truncated_series, std::move(c)};
  }

  std::map<prime_t, LocalFactor> locals_for(series_kind k, std::uint64_t N) const {
    std::map<prime_t, LocalFactor> out;
    for (prime_t p : primes_up_to(N)) out.emplace(p, local(k, p, max_exponent(p, N)));
    return out;
  }

  // Closed-form value at complex s (Re(s) > 0, s != 1 for the series with a pole).
  cplx evaluate(series_kind k, cplx s) const {
    if (k == series_kind::h) return finite_product(k, s);
    if (std::abs(s - 1.0) < 1e-14) throw pole_hit("EulerModel: s = 1");
    cplx v = zeta(s) * finite_product(k, s);
    if (k == series_kind::z) v *= zeta(2.0 * s + 1.0);
    return v;
  }

  // Residue at s = 1: prod_{p<=P} F_p(1/p)(1 - 1/p), times zeta(3) for Z.
  double residue(series_kind k) const {
    if (k == series_kind::h) return 0.0;
    double r = finite_product(k, cplx(1.0)).real();
    if (k == series_kind::z) r *= zeta(cplx(3.0)).real();
    return r;
  }

  // prod_{p<=P} H_p(1/p).
  double h_at_one() const { return finite_product(series_kind::h, cplx(1.0)).real(); }

  // Partial products prod_{p<=Q} H_p(1/p) at each data prime Q.
  std::vector<double> h_partial_products() const {
    std::vector<double> out;
    cplx acc(1.0);
    for (std::size_t i = 0; i < locals_.size(); ++i) {
      acc *= poly_eval(h_[i], cplx(1.0 / static_cast<double>(locals_[i].p)));
      out.push_back(acc.real());
    }
    return out;
  }

  // Upper bound for sum_n |a_n| n^-sigma, sigma > 1.
  double majorant(series_kind k, double sigma) const {
    if (!(sigma > 1.0)) throw outside_convergence("EulerModel::majorant: sigma <= 1");
    double m = 1.0;
    double removed = 1.0;  // prod_{p<=P} (1 - p^-sigma) and the zeta(2 sigma + 1) analogue
    for (std::size_t i = 0; i < locals_.size(); ++i) {
      const prime_t p = locals_[i].p;
      const double y = std::pow(static_cast<double>(p), -sigma);
      m *= local_abs_sum(k, i, y);
      if (k != series_kind::h) {
        removed *= 1.0 - y;
        if (k == series_kind::z) removed *= 1.0 - y * y / static_cast<double>(p);
      }
    }
    if (k == series_kind::h) return m;
    double tail = zeta_upper(sigma) * removed;
    if (k == series_kind::z) tail *= zeta_upper(2.0 * sigma + 1.0);
    return m * tail;
  }

  majorant_fn majorant_of(series_kind k) const {
    return [model = *this, k](double sigma) { return model.majorant(k, sigma); };
  }

 private:
  std::size_t index_of(prime_t p) const {
    const auto it = std::lower_bound(locals_.begin(), locals_.end(), p,
                                     [](const SatakeLocal& a, prime_t q) { return a.p < q; });
    if (it == locals_.end() || it->p != p) throw missing_prime(p);
    return static_cast<std::size_t>(it - locals_.begin());
  }

  // prod_{p<=P} of the local factor times the zeta factor it replaces.
  cplx finite_product(series_kind k, cplx s) const {
    cplx acc(1.0);
    for (std::size_t i = 0; i < locals_.size(); ++i) {
      const double lp = std::log(static_cast<double>(locals_[i].p));
      const cplx X = std::exp(-s * lp);
      const cplx hx = poly_eval(h_[i], X);
      if (k == series_kind::h) {
        acc *= hx;
        continue;
      }
      const cplx one_minus = 1.0 - X;
      switch (k) {
        case series_kind::l: acc *= one_minus / poly_eval(rankin_[i], X); break;
        case series_kind::d2: acc *= one_minus * hx / poly_eval(rankin_[i], X); break;
        default: {
          const cplx shift = 1.0 - X * X / static_cast<double>(locals_[i].p);
          acc *= one_minus * shift / poly_eval(spinor_[i], X);
        }
      }
    }
    return acc;
  }

  double local_abs_sum(series_kind k, std::size_t i, double y) const {
    const auto& row = abs_coeffs(k)[i];
    double acc = 0.0, yp = 1.0;
    for (double a : row) {
      acc += a * yp;
      yp *= y;
    }
    return acc + detail::local_remainder(k, locals_[i].p, majorant_order, y);
  }

  // |coefficients| of each data prime's local series, computed once per kind.
  const std::vector<std::vector<double>>& abs_coeffs(series_kind k) const {
    const auto idx = static_cast<std::size_t>(k);
    std::call_once(cache_->once[idx], [&] {
      auto& rows = cache_->rows[idx];
      for (std::size_t i = 0; i < locals_.size(); ++i) {
        const auto c = k == series_kind::h ? h_[i] : local(k, locals_[i].p, majorant_order).coeffs;
        std::vector<double> row;
        for (const cplx& x : c) row.push_back(std::abs(x));
        rows.push_back(std::move(row));
      }
    });
    return cache_->rows[idx];
  }

  struct abs_cache {
    std::once_flag once[5];
    std::vector<std::vector<double>> rows[5];
  };

  prime_t P_ = 0;
  std::vector<SatakeLocal> locals_;
  std::vector<std::vector<cplx>> spinor_, rankin_, h_;
  std::shared_ptr<abs_cache> cache_ = std::make_shared<abs_cache>();
};

inline CoefficientTable build_table(const EulerModel& model, series_kind k, std::uint64_t N) {
  CoefficientTable t = expand_coefficients(model.locals_for(k, N), N, to_string(k));
  t.majorant = model.majorant_of(k);
  return t;
}

}  // namespace rsconv
