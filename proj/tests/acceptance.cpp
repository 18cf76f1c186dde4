// Acceptance run: one PASS/FAIL line per criterion; nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rsconv/rsconv.hpp"
#include "test_support.hpp"

using namespace rsconv;
using rsconv::testing::acceptance_primes;
using rsconv::testing::angle_source;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome lemma_h() {
  const auto t0 = std::chrono::steady_clock::now();
  angle_source src(1001);
  double lin = 0.0, tail = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const prime_t p = acceptance_primes()[i % acceptance_primes().size()];
    const auto [a, b] = src.next();
    const auto c = h_construct(synthetic_satake(p, a, b));
    lin = std::max(lin, c.linear_defect);
    tail = std::max(tail, c.tail_defect);
  }
  const double secs = seconds_since(t0);
  return {lin < 1e-9 && tail < 1e-8 && secs < 10.0,
          "max |linear| " + num(lin) + ", max |deg 16..32| " + num(tail) + ", " + num(secs) + " s"};
}

Outcome satake_round_trip() {
  angle_source src(2002);
  double worst = 0.0;
  auto check = [&](const SatakeLocal& s) {
    worst = std::max(worst, permutation_distance(recover_satake(hecke_from(s)).betas, s.betas));
  };
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = src.next();
    check(synthetic_satake(acceptance_primes()[i % acceptance_primes().size()], a, b));
  }
  for (prime_t p : acceptance_primes()) {
    check(synthetic_satake(p, 0.0, 0.0));                // all roots 1
    check(synthetic_satake(p, std::numbers::pi, 0.0));   // all roots -1
  }
  return {worst < 1e-8, "max permutation distance " + num(worst) + " over 1000 draws + degenerate points"};
}

Outcome factorization() {
  const auto data = generate_synthetic(1000, 3003);
  const EulerModel m(data.locals);
  const std::uint64_t N = 10000;
  const auto h = build_table(m, series_kind::h, N), l = build_table(m, series_kind::l, N),
             d2 = build_table(m, series_kind::d2, N);
  double worst = 0.0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    long double acc = 0.0L;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      acc += static_cast<long double>(h[d]) * l[n / d];
      if (d * d != n) acc += static_cast<long double>(h[n / d]) * l[d];
    }
    worst = std::max(worst, std::abs(static_cast<double>(acc) - d2[n]));
  }
  return {worst < 1e-8, "max |(H*L)_n - D2_n| = " + num(worst) + " for n <= 10^4"};
}

Outcome spinor_identity() {
  const auto data = generate_synthetic(1000, 4004);
  const EulerModel m(data.locals);
  const std::uint64_t N = 1000000;
  const auto d1 = build_table(m, series_kind::d1, N), z = build_table(m, series_kind::z, N);
  bool agree = true;
  double worst_tail = 0.0, worst_tail_sigma = 0.0, first_small = 0.0;
  int small = 0;
  for (int i = 0; i < 20; ++i) {
    const cplx s(1.2 + 1.8 * i / 19.0, 4.0 * (i - 10) + 0.5);
    const auto zv = eval_series(z, s), dv = eval_series(d1, s);
    const auto zeta2 = zeta_checked(2.0 * s + 1.0);
    const double bound = zv.tail_bound + std::abs(zeta2.value) * dv.tail_bound + std::abs(dv.value) * zeta2.error_bound;
    agree &= std::abs(zv.value - zeta2.value * dv.value) <= bound;
    const double t = std::max(zv.tail_bound, dv.tail_bound);
    if (t < 1e-3 && small++ == 0) first_small = s.real();
    if (t > worst_tail) {
      worst_tail = t;
      worst_tail_sigma = s.real();
    }
  }
  return {agree && worst_tail < 1e-3,
          std::string("agreement within combined bounds: ") + (agree ? "yes" : "no") + ", largest tail bound " +
              num(worst_tail) + " at Re(s) = " + num(worst_tail_sigma) + " (needs < 1e-3); " +
              std::to_string(small) + "/20 points below 1e-3, from Re(s) = " + num(first_small)};
}

Outcome perron_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double x : {10.5, 100.5, 1000.5, 5000.5}) {
    const auto cfg = PerronConfig::with_window(x, 0.1, 200.0, 2.0);
    const auto line = perron_contour([](cplx s) { return zeta(s); }, cfg);
    const auto N = static_cast<std::uint64_t>(20 * x);
    CoefficientTable ones{"ones", N, std::vector<double>(N + 1, 1.0), {}, zeta_power_majorant(1)};
    const double budget = truncation_budget(ones, x, cfg.sigma, cfg.T) + line.quad_error;
    const double err = std::abs(line.value - std::floor(x));
    ok &= err <= budget;
    detail += "x=" + num(x) + " err " + num(err) + "/" + num(budget) + "; ";
  }
  const std::uint64_t N = 5000;
  CoefficientTable div{"d", N, std::vector<double>(N + 1, 0.0), {}, zeta_power_majorant(2)};
  for (std::uint64_t a = 1; a <= N; ++a)
    for (std::uint64_t b = a; b <= N; b += a) div.coeffs[b] += 1.0;
  std::uint64_t brute = 0;
  for (std::uint64_t n = 1; n <= 100; ++n)
    for (std::uint64_t d = 1; d <= n; ++d) brute += n % d == 0;
  const auto cfg = PerronConfig::with_window(100.5, 0.1, 200.0, 2.0);
  const auto line = perron_contour([](cplx s) { return zeta(s) * zeta(s); }, cfg);
  const double budget = truncation_budget(div, 100.5, cfg.sigma, cfg.T) + line.quad_error;
  const double err = std::abs(line.value - static_cast<double>(brute));
  ok &= brute == 482 && err <= budget;
  const double secs = seconds_since(t0);
  detail += "zeta^2 vs " + std::to_string(brute) + " err " + num(err) + "/" + num(budget) + "; " + num(secs) + " s";
  return {ok && secs < 60.0, detail};
}

Outcome exponents() {
  bool ok = true;
  double worst = 0.0;
  for (double eta : {0.001, 0.01, 0.05, 0.1}) {
    const auto b = error_budget(PerronConfig::asymptotic(std::pow(2.0, 40), eta), 20, 1.0);
    for (double e : {b.e1, b.e2, b.e3, b.e4}) worst = std::max(worst, std::abs(e - (31.0 / 32.0 + eta)));
    worst = std::max(worst, std::abs(b.k_exponent - 5.0 / 16.0));
  }
  ok = worst < 1e-12;
  return {ok, "max exponent deviation " + num(worst)};
}

Outcome convexity() {
  const auto fk = slope_in_k(1.1, 0.0, {50, 100, 200, 400});
  const auto ft = slope_in_t(1.1, 20, {10, 20, 40, 80});
  const auto g = rankin_gamma_factor(20);
  double crit = 0.0;
  for (double t : {0.0, 0.5, 5.0, 14.13, 50.0, 300.0, 1e4})
    crit = std::max(crit, std::abs(completed_ratio(g, cplx(0.5, t)) - 1.0));
  return {fk.relative_error() < 0.1 && ft.relative_error() < 0.1 && crit < 1e-10,
          "k slope " + num(fk.secant_slope) + " vs " + num(fk.predicted) + ", t slope " + num(ft.secant_slope) +
              " vs " + num(ft.predicted) + ", critical line defect " + num(crit)};
}

Outcome coefficient_bounds() {
  const std::uint64_t N = 100000;
  std::uint64_t violations = 0;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    const auto data = generate_synthetic(N, seed);
    const EulerModel m(data.locals);
    const auto d1 = build_table(m, series_kind::d1, N), z = build_table(m, series_kind::z, N);
    for (std::uint64_t n = 1; n <= N; ++n) {
      violations += std::abs(d1[n]) > trivial_lambda_bound(n) * (1.0 + 1e-12);
      violations += std::abs(z[n]) > static_cast<double>(divisor_d4(n)) * (1.0 + 1e-12);
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over n <= 10^5, three datasets"};
}

Outcome multiplicativity() {
  const auto data = generate_synthetic(1000, 5005);
  const EulerModel m(data.locals);
  const std::uint64_t L = 10000;
  std::uint64_t bad = 0, pairs = 0;
  for (auto k : {series_kind::d1, series_kind::d2, series_kind::z, series_kind::l, series_kind::h}) {
    const auto t = build_table(m, k, L);
    for (std::uint64_t a = 1; a <= L; ++a)
      for (std::uint64_t b = 1; a * b <= L; ++b) {
        if (std::gcd(a, b) != 1) continue;
        ++pairs;
        const double prod = t[a] * t[b];
        bad += std::abs(t[a * b] - prod) >= 1e-9 * std::max(1.0, std::abs(prod));
      }
  }
  return {bad == 0, std::to_string(bad) + " defective of " + std::to_string(pairs) + " coprime pairs"};
}

Outcome densities() {
  const auto data = generate_synthetic(2000, 6006);
  const auto d1 = build_table(EulerModel(data.locals), series_kind::d1, 100000);
  bool ok = true;
  std::string detail;
  for (std::uint64_t X : {1000u, 10000u, 100000u}) {
    std::uint64_t c_d = 0, c_log = 0, c_away = 0;
    for (std::uint64_t n = 1; n <= X; ++n) {
      std::uint64_t d = 0;
      for (std::uint64_t q = 1; q * q <= n; ++q)
        if (n % q == 0) d += q * q == n ? 1 : 2;
      const double a = std::fabs(d1[n]);
      c_d += a <= std::sqrt(static_cast<double>(d));
      c_log += a <= std::sqrt(std::log(static_cast<double>(n)));
      c_away += a >= 1.0 / 16.0;
    }
    const bool match = density_sqrt_d(d1, X).count == c_d && density_sqrt_log(d1, X).count == c_log &&
                       bounded_away_count(d1, X).count == c_away;
    ok &= match;
    detail += "X=" + std::to_string(X) + ": " + std::to_string(c_d) + "/" + std::to_string(c_log) + "/" +
              std::to_string(c_away) + (match ? "" : " MISMATCH") + "; ";
  }
  return {ok, detail};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "rsconv_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> runs;
  for (int i = 0; i < 2; ++i) {
    const auto path = (dir / ("report" + std::to_string(i) + ".json")).string();
    const char* argv[] = {"rsconv", "report", "--synthetic", "1000,42", "--max-n", "100000", "--no-timestamp",
                          "--out", path.c_str()};
    std::ostringstream out, err;
    const int code = cli::run(9, argv, out, err);
    if (code != 0) return {false, "report exited with " + std::to_string(code) + ": " + err.str()};
    std::ifstream f(path, std::ios::binary);
    runs.emplace_back(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  return {!runs[0].empty() && runs[0] == runs[1], std::to_string(runs[0].size()) + " bytes, identical: " +
                                                      (runs[0] == runs[1] ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, lemma_h},        {2, satake_round_trip}, {3, factorization}, {4, spinor_identity},
      {5, perron_oracle},  {6, exponents},         {7, convexity},     {8, coefficient_bounds},
      {9, multiplicativity}, {10, densities},      {11, determinism}};
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")\n" << std::flush;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failures ? 1 : 0;
}
