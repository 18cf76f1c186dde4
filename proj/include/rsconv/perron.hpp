#pragma once

// Truncated Perron formula on a vertical line, the rectangle shift to a line
// left of s = 1, and the four-term error budget.
//
//   A(x) = (1/2 pi i) int_{sigma-iT}^{sigma+iT} D(s) x^s/s ds + O(window) + O(x^sigma S D(sigma)/T)
//
// Shifting to Re(s) = delta picks up the pole at s = 1:
//
//   right = c x + I1 + I2(+) - I2(-)
//
// with I1 the upward integral on Re(s) = delta and I2(+-) the horizontal
// integrals at Im(s) = +-T, both taken from delta to sigma.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

#include "rsconv/arith.hpp"
#include "rsconv/dirichlet.hpp"
#include "rsconv/errors.hpp"
#include "rsconv/model.hpp"
#include "rsconv/quadrature.hpp"

namespace rsconv {

using series_evaluator = std::function<cplx(cplx)>;

struct PerronConfig {
  double x = 2.0;
  double eta = 0.01;
  double sigma = 1.01;
  double delta = 15.0 / 16.0 + 0.01;
  double alpha = 1.0 / 16.0;
  double beta = 1.0 / 32.0;
  double T = 2.0;
  double S = 2.0;

  // sigma = 1 + eta, delta = 15/16 + eta, T = x^(1/16), S = x^(1/32).
  static PerronConfig asymptotic(double x, double eta) {
    PerronConfig c = base(x, eta);
    c.T = std::pow(x, c.alpha);
    c.S = std::pow(x, c.beta);
    c.validate();
    return c;
  }

  // The same line positions with T and S given directly.
  static PerronConfig with_window(double x, double eta, double T, double S) {
    PerronConfig c = base(x, eta);
    c.T = T;
    c.S = S;
    c.validate();
    return c;
  }

  void validate() const {
    if (!(x >= 2.0)) throw parameter_domain("PerronConfig: x must be >= 2");
    if (!(eta > 0.0)) throw parameter_domain("PerronConfig: eta must be > 0");
    if (!(T >= 2.0 && S >= 2.0))
      throw parameter_domain("PerronConfig: T = " + std::to_string(T) + ", S = " +
                             std::to_string(S) + " must both be >= 2");
  }

  // The shift needs 1/2 < delta < 1.
  void validate_strip() const {
    if (!(delta > 0.5 && delta < 1.0))
      throw parameter_domain("PerronConfig: delta = " + std::to_string(delta) +
                             " outside (1/2, 1)");
  }

 private:
  static PerronConfig base(double x, double eta) {
    PerronConfig c;
    c.x = x;
    c.eta = eta;
    c.sigma = 1.0 + eta;
    c.delta = 15.0 / 16.0 + eta;
    return c;
  }
};

struct ContourValue {
  double value = 0.0;
  double quad_error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

inline cplx perron_integrand(const series_evaluator& F, double x, cplx s) {
  return F(s) * std::exp(s * std::log(x)) / s;
}

inline int oscillation_panels(double x, double T) {
  return std::max(4, static_cast<int>(std::ceil(T * std::log(x) / (2.0 * std::numbers::pi))) + 4);
}

}  // namespace detail

// (1/2 pi i) int_{c-iT}^{c+iT} F(s) x^s/s ds = (1/pi) int_0^T Re[F x^s/s] dt for
// F with real coefficients.
inline ContourValue vertical_line_integral(const series_evaluator& F, double x, double c,
                                           double T, double abs_tol,
                                           std::size_t max_evaluations = 4000000) {
  QuadOptions opt;
  opt.abs_tol = abs_tol * std::numbers::pi;
  opt.initial_panels = detail::oscillation_panels(x, T);
  opt.max_evaluations = max_evaluations;
  auto f = [&](double t) { return detail::perron_integrand(F, x, cplx(c, t)).real(); };
  const auto r = integrate<double>(f, 0.0, T, opt);
  return {r.value / std::numbers::pi, r.error / std::numbers::pi, r.evaluations};
}

inline ContourValue perron_contour(const series_evaluator& F, const PerronConfig& cfg,
                                   double abs_tol = -1.0) {
  cfg.validate();
  if (abs_tol <= 0.0) abs_tol = 1e-6 * cfg.x;
  return vertical_line_integral(F, cfg.x, cfg.sigma, cfg.T, abs_tol);
}

// Bound on |contour - A(x)| for a series with coefficient table t: the kernel
// (1/2 pi i) int y^s/s ds differs from [y > 1] by at most y^c min(1, 1/(pi T |log y|)).
// Terms n > N are bounded through the table majorant.
inline double truncation_budget(const CoefficientTable& t, double x, double c, double T) {
  if (!(static_cast<double>(t.N) > x))
    throw truncation_exceeded("truncation_budget: table must extend beyond x");
  if (!t.majorant) throw parameter_domain("truncation_budget: table has no majorant");
  const double pi = std::numbers::pi;
  long double acc = 0.0L, absum = 0.0L;
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    const double a = std::abs(t.coeffs[n]);
    if (a == 0.0) continue;
    const double nd = static_cast<double>(n);
    const double y = x / nd;
    acc += a * std::pow(y, c) * std::min(1.0, 1.0 / (pi * T * std::abs(std::log(y))));
    absum += a * std::pow(nd, -c);
  }
  const double rest = std::max(0.0, t.majorant(c) - static_cast<double>(absum)) + 1e-10 * t.majorant(c);
  const double far = std::pow(x, c) / (pi * T * std::log(static_cast<double>(t.N) / x)) * rest;
  return static_cast<double>(acc) + far;
}

struct ErrorBudget {
  // x-exponents of I1..I4 and the exponent of k.
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
  double k_exponent = 0.0;
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0;
  double total = 0.0;
  double max_exponent = 0.0;
};

//   I1 ~ A C k^{5(sigma-delta)} x^{8 alpha (sigma-delta) + delta}
//   I2 ~ A C k^{5(sigma-delta)} x^{sigma - alpha + 8 alpha (sigma-delta)}
//   I3 ~ x^{1 + eta - beta},   I4 ~ x^{sigma + beta - alpha}
// A bounds H on the shifted line, C is the measured convexity constant.
inline ErrorBudget error_budget(const PerronConfig& cfg, double k, double empirical_A,
                                double convexity_constant = 1.0) {
  if (!(cfg.eta > 0.0)) throw parameter_domain("error_budget: eta must be > 0");
  if (!(k > 0.0)) throw parameter_domain("error_budget: k must be positive");
  const double g = cfg.sigma - cfg.delta;
  ErrorBudget b;
  b.e1 = 8.0 * cfg.alpha * g + cfg.delta;
  b.e2 = cfg.sigma - cfg.alpha + 8.0 * cfg.alpha * g;
  b.e3 = 1.0 + cfg.eta - cfg.beta;
  b.e4 = cfg.sigma + cfg.beta - cfg.alpha;
  b.k_exponent = 5.0 * g;
  const double kf = std::pow(k, b.k_exponent);
  b.I1 = empirical_A * convexity_constant * kf * std::pow(cfg.x, b.e1);
  b.I2 = empirical_A * convexity_constant * kf * std::pow(cfg.x, b.e2);
  b.I3 = std::pow(cfg.x, b.e3);
  b.I4 = std::pow(cfg.x, b.e4);
  b.total = b.I1 + b.I2 + b.I3 + b.I4;
  b.max_exponent = std::max({b.e1, b.e2, b.e3, b.e4});
  return b;
}

struct RectangleSides {
  cplx right, left, top, bottom;  // (1/2 pi i) int; verticals upward, horizontals delta -> sigma
  double quad_error = 0.0;

  // (1/2 pi i) times the counter-clockwise boundary integral.
  cplx boundary() const { return right + bottom - left - top; }
};

// Sides of the rectangle [left_re, right_re] x [-T, T] for the integrand g.
inline RectangleSides rectangle_integral(const std::function<cplx(cplx)>& g, double left_re,
                                         double right_re, double T, double abs_tol,
                                         int initial_panels = 8) {
  if (!(left_re < right_re && T > 0.0)) throw parameter_domain("rectangle_integral: empty rectangle");
  QuadOptions opt;
  opt.abs_tol = abs_tol;
  opt.initial_panels = initial_panels;
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  RectangleSides r;
  auto vertical = [&](double c) {
    const auto q = integrate<cplx>([&](double t) { return g(cplx(c, t)) * cplx(0.0, 1.0); }, -T, T, opt);
    r.quad_error += q.error / (2.0 * std::numbers::pi);
    return q.value / two_pi_i;
  };
  auto horizontal = [&](double t) {
    const auto q = integrate<cplx>([&](double u) { return g(cplx(u, t)); }, left_re, right_re, opt);
    r.quad_error += q.error / (2.0 * std::numbers::pi);
    return q.value / two_pi_i;
  };
  r.right = vertical(right_re);
  r.left = vertical(left_re);
  r.top = horizontal(T);
  r.bottom = horizontal(-T);
  return r;
}

struct ShiftReport {
  double right = 0.0;  // Re of the line integral at sigma
  double I1 = 0.0;
  double I2_plus = 0.0;
  double I2_minus = 0.0;
  double residue = 0.0;  // c, so the main term is c x
  double residual = 0.0;  // right - (c x + I1 + I2_plus - I2_minus)
  double quad_error = 0.0;
};

// Residue bookkeeping for F = H L on the rectangle [delta, sigma] x [-T, T].
// L carries the only pole inside (s = 1) with residue l_residue; H is analytic
// for Re(s) > 1/2.
inline ShiftReport shifted_contour_check(const series_evaluator& H, const series_evaluator& L,
                                         double l_residue, const PerronConfig& cfg,
                                         double abs_tol = -1.0) {
  cfg.validate();
  cfg.validate_strip();
  if (abs_tol <= 0.0) abs_tol = 1e-6 * cfg.x;
  const double lx = std::log(cfg.x);
  auto g = [&](cplx s) { return H(s) * L(s) * std::exp(s * lx) / s; };
  const series_evaluator F = [&](cplx s) { return H(s) * L(s); };

  ShiftReport r;
  const auto right = vertical_line_integral(F, cfg.x, cfg.sigma, cfg.T, abs_tol);
  const auto left = vertical_line_integral(F, cfg.x, cfg.delta, cfg.T, abs_tol);
  QuadOptions opt;
  opt.abs_tol = abs_tol;
  opt.initial_panels = 4;
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  const auto top = integrate<cplx>([&](double u) { return g(cplx(u, cfg.T)); }, cfg.delta, cfg.sigma, opt);
  const auto bottom = integrate<cplx>([&](double u) { return g(cplx(u, -cfg.T)); }, cfg.delta, cfg.sigma, opt);

  r.right = right.value;
  r.I1 = left.value;
  r.I2_plus = (top.value / two_pi_i).real();
  r.I2_minus = (bottom.value / two_pi_i).real();
  r.residue = H(cplx(1.0)).real() * l_residue;
  r.residual = r.right - (r.residue * cfg.x + r.I1 + r.I2_plus - r.I2_minus);
  r.quad_error = right.quad_error + left.quad_error + (top.error + bottom.error) / (2.0 * std::numbers::pi);
  return r;
}

struct PerronReport {
  PerronConfig config;
  double contour_value = 0.0;
  double quad_error = 0.0;
  double direct_sum = 0.0;
  double truncation_budget = 0.0;  // rigorous bound on |contour - direct|
  double achieved_error = 0.0;     // |contour - direct|
  double main_term = 0.0;          // c x
  double residue = 0.0;
  double I1 = 0.0, I2_plus = 0.0, I2_minus = 0.0;
  double I3_bound = 0.0, I4_bound = 0.0;
  double predicted_error = 0.0;  // |I1| + |I2+| + |I2-| + I3 + I4
  double shift_residual = 0.0;
  ErrorBudget budget;
};

// Sum of a_n over x - x/S <= n < x + x/S, or the Ramanujan-type bound
// trivial_lambda_bound(n)^2 where the table stops short.
inline double window_sum(const CoefficientTable& d2, double x, double S) {
  const double lo = x - x / S, hi = x + x / S;
  long double acc = 0.0L;
  for (auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(lo))); static_cast<double>(n) < hi; ++n) {
    if (n <= d2.N) {
      acc += std::abs(d2.coeffs[n]);
    } else {
      const double b = trivial_lambda_bound(n);
      acc += b * b;
    }
  }
  return static_cast<double>(acc);
}

// Full experiment for the D2 series of a finite-prime model.
inline PerronReport perron_report(const EulerModel& model, const CoefficientTable& d2,
                                  const PerronConfig& cfg, double k, double empirical_A,
                                  double convexity_constant = 1.0) {
  cfg.validate();
  PerronReport rep;
  rep.config = cfg;
  const series_evaluator F = [&](cplx s) { return model.evaluate(series_kind::d2, s); };
  const auto line = perron_contour(F, cfg);
  rep.contour_value = line.value;
  rep.quad_error = line.quad_error;
  rep.direct_sum = partial_sum(d2, cfg.x);
  rep.truncation_budget = truncation_budget(d2, cfg.x, cfg.sigma, cfg.T) + line.quad_error;
  rep.achieved_error = std::abs(rep.contour_value - rep.direct_sum);

  const series_evaluator H = [&](cplx s) { return model.evaluate(series_kind::h, s); };
  const series_evaluator L = [&](cplx s) { return model.evaluate(series_kind::l, s); };
  const auto shift = shifted_contour_check(H, L, model.residue(series_kind::l), cfg);
  rep.residue = shift.residue;
  rep.main_term = shift.residue * cfg.x;
  rep.I1 = shift.I1;
  rep.I2_plus = shift.I2_plus;
  rep.I2_minus = shift.I2_minus;
  rep.shift_residual = shift.residual;

  rep.I3_bound = window_sum(d2, cfg.x, cfg.S);
  rep.I4_bound = std::pow(cfg.x, cfg.sigma) * cfg.S * model.evaluate(series_kind::d2, cplx(cfg.sigma)).real() / cfg.T;
  rep.predicted_error = std::abs(rep.I1) + std::abs(rep.I2_plus) + std::abs(rep.I2_minus) +
                        rep.I3_bound + rep.I4_bound;
  rep.budget = error_budget(cfg, k, empirical_A, convexity_constant);
  return rep;
}

}  // namespace rsconv
