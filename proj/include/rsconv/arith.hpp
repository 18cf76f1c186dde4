#pragma once

// Elementary arithmetic functions and a smallest-prime-factor sieve.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rsconv {

using prime_t = std::uint64_t;

struct prime_power {
  prime_t p;
  int e;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// Trial division; fine for the n <= 10^7 range used throughout.
inline std::vector<prime_power> factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  std::vector<prime_power> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline double binomial(int n, int k) {
  if (k < 0 || n < k) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// d(n): number of divisors.
inline std::uint64_t divisor_d(std::uint64_t n) {
  std::uint64_t r = 1;
  for (auto [p, e] : factorize(n)) r *= static_cast<std::uint64_t>(e + 1);
  return r;
}

// d_4(n): ordered factorizations n = abcd; d_4(p^e) = C(e+3, 3).
inline std::uint64_t divisor_d4(std::uint64_t n) {
  std::uint64_t r = 1;
  for (auto [p, e] : factorize(n)) {
    std::uint64_t E = static_cast<std::uint64_t>(e);
    r *= (E + 1) * (E + 2) * (E + 3) / 6;
  }
  return r;
}

inline int moebius(std::uint64_t n) {
  int r = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    r = -r;
  }
  return r;
}

// Sum over squarefree m with m^2 | n of |mu(m)|/m * d_4(n/m^2). Multiplicative:
// the local factor at p^e is d_4(p^e) + [e >= 2] d_4(p^{e-2}) / p.
inline double trivial_lambda_bound(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("trivial_lambda_bound: n >= 1");
  double r = 1.0;
  for (auto [p, e] : factorize(n)) {
    double local = binomial(e + 3, 3);
    if (e >= 2) local += binomial(e + 1, 3) / static_cast<double>(p);
    r *= local;
  }
  return r;
}

// Smallest-prime-factor sieve over [0, n].
class prime_sieve {
 public:
  explicit prime_sieve(std::uint64_t n) : spf_(n + 1, 0) {
    for (std::uint64_t i = 2; i <= n; ++i) {
      if (spf_[i] != 0) continue;
      primes_.push_back(i);
      for (std::uint64_t j = i; j <= n; j += i)
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }

  std::uint64_t limit() const { return spf_.size() - 1; }
  const std::vector<prime_t>& primes() const { return primes_; }
  std::uint64_t smallest_factor(std::uint64_t n) const { return spf_.at(n); }
  bool is_prime(std::uint64_t n) const { return n >= 2 && spf_.at(n) == n; }

  // Splits n = p^e * m with p the smallest prime factor of n (n >= 2).
  std::pair<prime_power, std::uint64_t> split(std::uint64_t n) const {
    const std::uint64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    return {{p, e}, n};
  }

  std::vector<prime_power> factorize(std::uint64_t n) const {
    std::vector<prime_power> out;
    while (n > 1) {
      auto [pp, m] = split(n);
      out.push_back(pp);
      n = m;
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> spf_;
  std::vector<prime_t> primes_;
};

inline std::vector<prime_t> primes_up_to(std::uint64_t n) {
  if (n < 2) return {};
  return prime_sieve(n).primes();
}

}  // namespace rsconv
