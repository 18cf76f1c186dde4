#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rsconv/local_factors.hpp"
#include "test_support.hpp"

using namespace rsconv;
using rsconv::testing::angle_source;

namespace {

constexpr double pi = std::numbers::pi;

SatakeLocal all_equal(prime_t p, cplx b) { return {p, {b, b, b, b}, satake_source::synthetic}; }

SatakeLocal sixth_roots(prime_t p) {
  return synthetic_satake(p, pi / 3, pi / 3);  // e^{+-i pi/3}, e^{+-2i pi/3}
}

void expect_coeffs(const LocalFactor& f, const std::vector<double>& expected, double tol) {
  ASSERT_EQ(f.coeffs.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    EXPECT_NEAR(std::abs(f.coeffs[i] - cplx(expected[i])), 0.0, tol) << "X^" << i;
}

std::vector<double> binomial_row(int n, int sign) {
  std::vector<double> out;
  for (int k = 0; k <= n; ++k) out.push_back(binomial(n, k) * ((k % 2 && sign < 0) ? -1.0 : 1.0));
  return out;
}

}  // namespace

TEST(SpinorInverse, Examples) {
  expect_coeffs(spinor_inverse(all_equal(2, cplx(1))), {1, -4, 6, -4, 1}, 1e-15);
  expect_coeffs(spinor_inverse(all_equal(2, cplx(-1))), {1, 4, 6, 4, 1}, 1e-15);
  expect_coeffs(spinor_inverse(sixth_roots(5)), {1, 0, 1, 0, 1}, 1e-14);
}

TEST(SpinorInverse, PalindromicRealCoefficients) {
  angle_source src(1);
  for (int i = 0; i < 200; ++i) {
    const auto [a, b] = src.next();
    const auto f = spinor_inverse(synthetic_satake(7, a, b));
    EXPECT_LT(f.max_imaginary(), 1e-10);
    EXPECT_NEAR(std::abs(f.coeffs[1] - f.coeffs[3]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(f.coeffs[4] - cplx(1)), 0.0, 1e-12);
  }
}

TEST(D1Local, Examples) {
  expect_coeffs(d1_local(all_equal(2, cplx(1)), 2), {1, 4, 9.5}, 1e-14);
  expect_coeffs(d1_local(sixth_roots(3), 0), {1}, 0.0);
  expect_coeffs(d1_local(sixth_roots(3), 1), {1, 0}, 1e-14);
  EXPECT_THROW(d1_local(sixth_roots(3), -1), std::invalid_argument);
}

TEST(D1Local, CoefficientBoundAndReality) {
  angle_source src(2);
  for (int i = 0; i < 300; ++i) {
    const auto [a, b] = src.next();
    const prime_t p = (i % 2) ? 3 : 101;
    const auto f = d1_local(synthetic_satake(p, a, b), 40);
    EXPECT_LT(f.max_imaginary(), 1e-10);
    for (int d = 0; d <= 40; ++d)
      EXPECT_LE(std::abs(f.coeffs[d]), lambda_power_bound(p, d) + 1e-9) << d;
  }
  // The bound is attained in absolute value at the all-ones point minus the 1/p
  // shift, and at the all -1 point with the shift added back for even d.
  const auto ones = d1_local(all_equal(5, cplx(1)), 10);
  for (int d = 0; d <= 10; ++d)
    EXPECT_NEAR(ones.coeffs[d].real(), binomial(d + 3, 3) - binomial(d + 1, 3) / 5.0, 1e-9);
}

TEST(RankinInverse, Examples) {
  expect_coeffs(rankin_inverse(all_equal(2, cplx(1))), binomial_row(16, -1), 1e-9);
  expect_coeffs(rankin_inverse(all_equal(2, cplx(-1))), binomial_row(16, -1), 1e-9);

  angle_source src(3);
  for (int i = 0; i < 200; ++i) {
    const auto [a, b] = src.next();
    const auto s = synthetic_satake(11, a, b);
    const auto f = rankin_inverse(s);
    ASSERT_EQ(f.coeffs.size(), 17u);
    EXPECT_NEAR(std::abs(f.coeffs[0] - cplx(1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f.coeffs[16]), 1.0, 1e-12);
    EXPECT_LT(f.max_imaginary(), 1e-10);
    cplx e1(0);
    for (const cplx& b : s.betas) e1 += b;
    EXPECT_NEAR(std::abs(f.coeffs[1] + e1 * e1), 0.0, 1e-10);
  }
}

TEST(D2Local, Examples) {
  expect_coeffs(d2_local(all_equal(2, cplx(1)), 2), {1, 16, 90.25}, 1e-12);
  expect_coeffs(d2_local(sixth_roots(7), 0), {1}, 0.0);

  angle_source src(4);
  for (int i = 0; i < 100; ++i) {
    const auto [a, b] = src.next();
    const auto s = synthetic_satake(13, a, b);
    const auto d1 = d1_local(s, 12);
    const auto d2 = d2_local(s, 12);
    cplx e1(0);
    for (const cplx& x : s.betas) e1 += x;
    EXPECT_NEAR(std::abs(d2.coeffs[1] - e1 * e1), 0.0, 1e-12);
    for (int d = 0; d <= 12; ++d) {
      EXPECT_NEAR(std::abs(d2.coeffs[d] - d1.coeffs[d] * d1.coeffs[d]), 0.0, 1e-9);
      EXPECT_GE(d2.coeffs[d].real(), -1e-10);
    }
    EXPECT_LT(d2.max_imaginary(), 1e-10);
  }
}

TEST(D2Local, PartialFractionOracle) {
  angle_source src(5);
  int checked = 0;
  while (checked < 300) {
    const auto [a, b] = src.next();
    const prime_t primes[] = {3, 5, 7, 11, 13};
    const auto s = synthetic_satake(primes[checked % 5], a, b);
    double gap = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) gap = std::min(gap, std::abs(s.betas[i] - s.betas[j]));
    if (gap < 0.05) continue;  // the closed form needs distinct betas
    const auto series = d2_local(s, 16);
    const auto closed = rsconv::testing::d2_partial_fractions(s, 16);
    for (int d = 0; d <= 16; ++d)
      EXPECT_NEAR(std::abs(series.coeffs[d] - closed[d]), 0.0,
                  1e-8 * std::max(1.0, std::abs(closed[d])))
          << d;
    ++checked;
  }
}

TEST(HLocal, AllOnesPoint) {
  for (prime_t p : {2u, 3u, 10007u}) {
    const auto c = h_construct(all_equal(p, cplx(1)));
    EXPECT_LT(c.tail_defect, 1e-9) << p;
    EXPECT_LT(c.linear_defect, 1e-12) << p;
    EXPECT_NEAR(std::abs(c.h.coeffs[0] - cplx(1)), 0.0, 1e-15);
    EXPECT_NO_THROW(h_local(all_equal(p, cplx(1))));
  }
}

TEST(HLocal, RandomDrawsAreBoundedPolynomials) {
  angle_source src(6);
  double max_coeff = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = src.next();
    const prime_t p = rsconv::testing::acceptance_primes()[i % 7];
    const auto s = synthetic_satake(p, a, b);
    const auto c = h_construct(s);
    EXPECT_LT(c.linear_defect, 1e-9);
    EXPECT_LT(c.tail_defect, 1e-8);
    EXPECT_LE(c.observed_degree, 15);
    for (const cplx& h : c.h.coeffs) max_coeff = std::max(max_coeff, std::abs(h));
  }
  // Absolutely bounded; the p-independent crude bound sum |coeffs of R| * max|D2|
  // to degree 15 is far larger, so this only guards against blow-ups.
  EXPECT_LT(max_coeff, 1e6);
}

TEST(HLocal, MultiplyBackReproducesD2) {
  angle_source src(8);
  for (int i = 0; i < 100; ++i) {
    const auto [a, b] = src.next();
    const auto s = synthetic_satake(5, a, b);
    const auto h = h_local(s);
    const auto l = rankin_series(s, 32);
    const auto d2 = d2_local(s, 32);
    const auto back = series_multiply(h.coeffs, l.coeffs, 33);
    // Tolerance relative to sum |h_i| |l_{d-i}|: the double product cancels
    // terms of size ~C(d+15,15).
    for (int d = 0; d <= 32; ++d) {
      double scale = 1.0;
      for (int i = 0; i <= d && i < static_cast<int>(h.coeffs.size()); ++i)
        scale += std::abs(h.coeffs[i]) * std::abs(l.coeffs[d - i]);
      EXPECT_NEAR(std::abs(back[d] - d2.coeffs[d]), 0.0, 1e-12 * scale) << d;
    }
  }
}

TEST(HLocal, ViolationIsReported) {
  // Far-from-unitary parameters: D2 coefficients reach ~16^32 and the
  // cancellation in degrees 16..32 is lost even in quad precision.
  const SatakeLocal wild{7, {cplx(4), cplx(4), cplx(0.25), cplx(0.25)}, satake_source::ingested};
  try {
    h_local(wild);
    FAIL() << "expected polynomiality_violation";
  } catch (const polynomiality_violation& e) {
    EXPECT_EQ(e.prime, 7u);
    EXPECT_GE(e.degree, 16);
    EXPECT_GT(e.magnitude, 1e-9);
  }
}

TEST(HValueAtOne, Examples) {
  const cplx v = h_value_at_one(all_equal(2, cplx(1)));
  EXPECT_LT(std::abs(v.imag()), 1e-12);
  EXPECT_TRUE(std::isfinite(v.real()));

  for (prime_t p : {2u, 3u, 101u}) {
    const cplx id = h_value_at_one(synthetic_satake(p, 0.0, 0.0));
    EXPECT_GT(id.real(), 0.0);
    EXPECT_LT(std::abs(id.imag()), 1e-12);
  }
}

TEST(HValueAtOne, DeviationDecaysLikeInverseSquare) {
  // Fixed angles; |H_p(1/p) - 1| against p on a log-log scale.
  const double a = 0.7, b = 1.9;
  std::vector<double> xs, ys;
  for (prime_t p : {101u, 1009u, 10007u}) {
    const cplx v = h_value_at_one(synthetic_satake(p, a, b));
    EXPECT_LT(std::abs(v.imag()), 1e-10);
    xs.push_back(std::log(static_cast<double>(p)));
    ys.push_back(std::log(std::abs(v.real() - 1.0)));
  }
  const double slope = (ys[2] - ys[0]) / (xs[2] - xs[0]);
  EXPECT_NEAR(slope, -2.0, 0.1);
}
