#pragma once

// Gamma factor of the degree-16 Rankin-Selberg L-function of a weight k form,
//
//   L_inf(s) = (G_R(s) G_R(s+1))^2 (G_C(s+k-1) G_C(s+k-2))^2 G_C(s+1) G_C(s+2k-3)
//
// with G_R(s) = pi^{-s/2} Gamma(s/2) and G_C(s) = 2 (2 pi)^{-s} Gamma(s), and the
// convexity bounds derived from it. Everything is assembled in log space.

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "rsconv/errors.hpp"
#include "rsconv/special.hpp"

namespace rsconv {

enum class gamma_kind { real, complex };

struct GammaAtom {
  gamma_kind kind;
  double shift;
  int multiplicity;
};

struct GammaFactor {
  int k = 10;
  std::vector<GammaAtom> atoms;
};

inline GammaFactor rankin_gamma_factor(int k) {
  if (k < 10) throw parameter_domain("gamma factor: weight must be >= 10");
  const double kk = k;
  return {k,
          {{gamma_kind::real, 0.0, 2},
           {gamma_kind::real, 1.0, 2},
           {gamma_kind::complex, kk - 1.0, 2},
           {gamma_kind::complex, kk - 2.0, 2},
           {gamma_kind::complex, 1.0, 1},
           {gamma_kind::complex, 2.0 * kk - 3.0, 1}}};
}

inline cplx log_gamma_atom(gamma_kind kind, cplx z) {
  constexpr double pi = std::numbers::pi;
  if (kind == gamma_kind::real) {
    const cplx half = z / 2.0;
    if (gamma_pole_distance(half) < 1e-12) throw pole_hit("Gamma_R pole at s = " + std::to_string(z.real()));
    return -half * std::log(pi) + log_gamma(half);
  }
  if (gamma_pole_distance(z) < 1e-12) throw pole_hit("Gamma_C pole at s = " + std::to_string(z.real()));
  return std::log(2.0) - z * std::log(2.0 * pi) + log_gamma(z);
}

inline cplx log_gamma_factor(const GammaFactor& g, cplx s) {
  cplx acc(0.0);
  for (const auto& a : g.atoms) acc += static_cast<double>(a.multiplicity) * log_gamma_atom(a.kind, s + a.shift);
  return acc;
}

// |L_inf(s) / L_inf(1 - s)|.
inline double completed_ratio(const GammaFactor& g, cplx s) {
  return std::exp((log_gamma_factor(g, s) - log_gamma_factor(g, 1.0 - s)).real());
}

inline double log_completed_ratio(const GammaFactor& g, cplx s) {
  return (log_gamma_factor(g, s) - log_gamma_factor(g, 1.0 - s)).real();
}

inline double trivial_L_bound(double sigma) {
  if (!(sigma > 1.0)) throw parameter_domain("trivial_L_bound: sigma must exceed 1");
  return std::pow(sigma / (sigma - 1.0), 16);
}

// k^{5(sigma-delta)} (sigma/(sigma-1))^16 |delta+it|^{8(sigma-delta)}, without the
// delta-dependent implied constant.
inline double convexity_bound(double k, double sigma, double delta, double t) {
  if (!(sigma > 1.0 && sigma < 2.0))
    throw parameter_domain("convexity_bound: need 1 < sigma < 2");
  if (!(delta > 1.0 - sigma && delta <= sigma))
    throw parameter_domain("convexity_bound: need 1 - sigma < delta <= sigma");
  if (!(k > 0.0)) throw parameter_domain("convexity_bound: k must be positive");
  const double gap = sigma - delta;
  return std::pow(k, 5.0 * gap) * trivial_L_bound(sigma) *
         std::pow(std::hypot(delta, t), 8.0 * gap);
}

struct SlopePoint {
  double x;  // k or t
  double log_ratio;
};

struct SlopeFit {
  std::string variable;  // "k" or "t"
  double sigma = 0.0;
  double fixed = 0.0;  // t for a k sweep, k for a t sweep
  std::vector<SlopePoint> points;
  double secant_slope = 0.0;  // between the two largest grid points
  double lsq_slope = 0.0;     // least squares over the whole grid
  double predicted = 0.0;

  double relative_error() const { return std::abs(secant_slope - predicted) / predicted; }
};

namespace detail {

inline void finish_fit(SlopeFit& f) {
  const auto& pts = f.points;
  const std::size_t n = pts.size();
  const double x1 = std::log(pts[n - 2].x), x2 = std::log(pts[n - 1].x);
  f.secant_slope = (pts[n - 1].log_ratio - pts[n - 2].log_ratio) / (x2 - x1);
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += std::log(p.x) / static_cast<double>(n);
    my += p.log_ratio / static_cast<double>(n);
  }
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : pts) {
    sxy += (std::log(p.x) - mx) * (p.log_ratio - my);
    sxx += (std::log(p.x) - mx) * (std::log(p.x) - mx);
  }
  f.lsq_slope = sxy / sxx;
}

}  // namespace detail

// log completed_ratio(sigma + it) against log k; prediction 5(2 sigma - 1).
inline SlopeFit slope_in_k(double sigma, double t, const std::vector<int>& ks) {
  if (ks.size() < 2) throw parameter_domain("slope_in_k: need at least two weights");
  SlopeFit f{"k", sigma, t, {}, 0.0, 0.0, 5.0 * (2.0 * sigma - 1.0)};
  for (int k : ks)
    f.points.push_back({static_cast<double>(k), log_completed_ratio(rankin_gamma_factor(k), cplx(sigma, t))});
  detail::finish_fit(f);
  return f;
}

// log completed_ratio(sigma + it) against log t; prediction 8(2 sigma - 1).
inline SlopeFit slope_in_t(double sigma, int k, const std::vector<double>& ts) {
  if (ts.size() < 2) throw parameter_domain("slope_in_t: need at least two heights");
  SlopeFit f{"t", sigma, static_cast<double>(k), {}, 0.0, 0.0, 8.0 * (2.0 * sigma - 1.0)};
  const auto g = rankin_gamma_factor(k);
  for (double t : ts) f.points.push_back({t, log_completed_ratio(g, cplx(sigma, t))});
  detail::finish_fit(f);
  return f;
}

// Rows: variable,sigma,fixed,x,log_ratio,secant_slope,lsq_slope,predicted_slope
inline void write_slope_csv(std::ostream& os, const std::vector<SlopeFit>& fits) {
  os << "variable,sigma,fixed,x,log_ratio,secant_slope,lsq_slope,predicted_slope\r\n";
  char buf[256];
  for (const auto& f : fits)
    for (const auto& p : f.points) {
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\r\n",
                    f.variable.c_str(), f.sigma, f.fixed, p.x, p.log_ratio, f.secant_slope,
                    f.lsq_slope, f.predicted);
      os << buf;
    }
}

}  // namespace rsconv
