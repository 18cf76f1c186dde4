#pragma once

// Command-line front end. run() is callable in-process so tests can drive it.
//
// Exit codes: 0 success, 1 validation failure (a machine-readable report is
// still written), 2 usage error.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsconv/rsconv.hpp"

namespace rsconv::cli {

using json = nlohmann::ordered_json;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised after the failure report has been written.
class validation_failed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string dataset;
  std::string synthetic;
  std::uint64_t max_n = 10000;
  std::string out;
  std::string format = "json";
  double tau_unit = 1e-9;
  double tau_poly = 1e-9;
  bool no_timestamp = false;
};

struct Source {
  EigenformDataset data;
  std::string kind;  // "synthetic" or "dataset"
  prime_t P = 0;
  std::uint64_t seed = 0;
};

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Temp file in the target directory, then rename.
inline void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(static_cast<long long>(
                      std::chrono::steady_clock::now().time_since_epoch().count()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw usage_error("cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw usage_error("write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, target);
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void emit(const std::string& text) {
    if (c_.out.empty())
      out_ << text;
    else
      write_atomic(c_.out, text);
  }

  void emit_json(json j) {
    if (!c_.no_timestamp) j["generated_at"] = utc_now();
    emit(j.dump(2) + "\n");
  }

  bool csv() const { return c_.format == "csv"; }

  Source load_source(bool required = true) {
    const bool has_d = !c_.dataset.empty(), has_s = !c_.synthetic.empty();
    if (has_d && has_s) throw usage_error("give exactly one of --dataset and --synthetic");
    if (!has_d && !has_s) {
      if (required) throw usage_error("a data source is required: --dataset <path> or --synthetic P,seed");
      return {};
    }
    Source src;
    if (has_s) {
      const auto comma = c_.synthetic.find(',');
      try {
        if (comma == std::string::npos) throw std::invalid_argument("no comma");
        std::size_t used = 0;
        const std::string a = c_.synthetic.substr(0, comma), b = c_.synthetic.substr(comma + 1);
        src.P = std::stoull(a, &used);
        if (used != a.size()) throw std::invalid_argument("P");
        src.seed = std::stoull(b, &used);
        if (used != b.size()) throw std::invalid_argument("seed");
      } catch (const std::exception&) {
        throw usage_error("--synthetic expects P,seed with non-negative integers");
      }
      if (src.P < 2) throw usage_error("--synthetic: P must be >= 2");
      src.data = generate_synthetic(src.P, src.seed);
      src.kind = "synthetic";
      return src;
    }
    RecoveryOptions opts;
    opts.tau_unit = c_.tau_unit;
    try {
      src.data = load_dataset(c_.dataset, opts);
    } catch (const parse_error& e) {
      fail({{"status", "validation_failure"}, {"kind", "parse_error"}, {"line", e.line}, {"message", e.what()}});
    } catch (const gap_in_primes& e) {
      fail({{"status", "validation_failure"}, {"kind", "gap_in_primes"}, {"prime", e.prime}, {"message", e.what()}});
    } catch (const duplicate_prime& e) {
      fail({{"status", "validation_failure"}, {"kind", "duplicate_prime"}, {"prime", e.prime}, {"message", e.what()}});
    }
    if (!src.data.ok()) {
      json j{{"status", "validation_failure"}, {"kind", "ramanujan"}, {"label", src.data.label}};
      j["failing_primes"] = src.data.ramanujan_failures;
      j["warnings"] = src.data.warnings;
      fail(std::move(j));
    }
    src.kind = "dataset";
    src.P = src.data.max_prime;
    return src;
  }

  [[noreturn]] void fail(json report) {
    const std::string msg = report.value("message", std::string("dataset failed validation"));
    emit(report.dump(2) + "\n");
    throw validation_failed(msg);
  }

  json meta(const char* command, const Source& s) const {
    json m{{"command", command}};
    if (!s.kind.empty()) {
      m["source"] = s.kind;
      m["label"] = s.data.label;
      m["max_prime"] = s.data.max_prime;
      m["weight"] = s.data.weight;
      if (s.kind == "synthetic") m["seed"] = s.seed;
      for (const auto& w : s.data.warnings) m["warnings"].push_back(w);
    }
    m["max_n"] = c_.max_n;
    return m;
  }

  EulerModel model(const Source& s) const { return EulerModel(s.data.locals, c_.tau_poly); }

  Common c_;
  std::ostream& out_;
  std::ostream& err_;
};

inline series_kind parse_kind(const std::string& s) {
  if (s == "d1" || s == "D1") return series_kind::d1;
  if (s == "d2" || s == "D2") return series_kind::d2;
  if (s == "z" || s == "Z") return series_kind::z;
  if (s == "l" || s == "L") return series_kind::l;
  if (s == "h" || s == "H") return series_kind::h;
  throw usage_error("unknown series '" + s + "' (d1, d2, z, l, h)");
}

inline cplx parse_point(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, comma);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    double im = 0.0;
    if (comma != std::string::npos) {
      const std::string b = text.substr(comma + 1);
      im = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    }
    return {re, im};
  } catch (const std::exception&) {
    throw usage_error("cannot read complex point '" + text + "' (expected re or re,im)");
  }
}

inline std::vector<std::uint64_t> decades(std::uint64_t N) {
  std::vector<std::uint64_t> xs;
  for (std::uint64_t X = 1000; X <= N; X *= 10) xs.push_back(X);
  if (xs.empty() || xs.back() != N) xs.push_back(N);
  return xs;
}

inline json density_json(const DensityReport& r) {
  return {{"X", r.X}, {"predicate", r.predicate}, {"count", r.count}, {"density", r.density}};
}

inline json estimate_json(const CFEstimate& e) {
  return {{"x_lo", e.x_lo},           {"x_hi", e.x_hi},
          {"slope", e.slope},         {"fit_residual", e.fit_residual},
          {"min_ratio", e.min_ratio}, {"max_ratio", e.max_ratio},
          {"h_at_one", e.h_at_one},   {"l_residue", e.l_residue},
          {"model_residue", e.model_residue}, {"ratio", e.ratio}};
}

inline json budget_json(const ErrorBudget& b) {
  return {{"exponents", {b.e1, b.e2, b.e3, b.e4}},
          {"k_exponent", b.k_exponent},
          {"max_exponent", b.max_exponent},
          {"terms", {b.I1, b.I2, b.I3, b.I4}},
          {"total", b.total}};
}

inline json perron_json(const PerronReport& r) {
  const auto& c = r.config;
  return {{"config", {{"x", c.x}, {"eta", c.eta}, {"sigma", c.sigma}, {"delta", c.delta},
                      {"alpha", c.alpha}, {"beta", c.beta}, {"T", c.T}, {"S", c.S}}},
          {"contour_value", r.contour_value},
          {"quad_error", r.quad_error},
          {"direct_sum", r.direct_sum},
          {"achieved_error", r.achieved_error},
          {"truncation_budget", r.truncation_budget},
          {"within_budget", r.achieved_error <= r.truncation_budget},
          {"residue", r.residue},
          {"main_term", r.main_term},
          {"I1", r.I1},
          {"I2_plus", r.I2_plus},
          {"I2_minus", r.I2_minus},
          {"I3_bound", r.I3_bound},
          {"I4_bound", r.I4_bound},
          {"predicted_error", r.predicted_error},
          {"shift_residual", r.shift_residual},
          {"error_budget", budget_json(r.budget)}};
}

inline json slope_json(const SlopeFit& f) {
  json pts = json::array();
  for (const auto& p : f.points) pts.push_back({p.x, p.log_ratio});
  return {{"variable", f.variable}, {"sigma", f.sigma}, {"fixed", f.fixed},
          {"points", pts},          {"secant_slope", f.secant_slope},
          {"lsq_slope", f.lsq_slope}, {"predicted_slope", f.predicted},
          {"relative_error", f.relative_error()}};
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- subcommands ----

inline void cmd_satake(Runner& r) {
  const auto src = r.load_source();
  json rows = json::array();
  std::ostringstream csv;
  csv << "p,lambda_p,lambda_p2,theta1,theta2,modulus_defect,pass\r\n";
  for (std::size_t i = 0; i < src.data.locals.size(); ++i) {
    const auto& s = src.data.locals[i];
    const auto& pr = src.data.pairs[i];
    const auto rep = validate_ramanujan(s, r.c_.tau_unit);
    const auto ang = satake_angles(s);
    json b = json::array();
    for (const cplx& z : s.betas) b.push_back(cplx_json(z));
    rows.push_back({{"p", s.p}, {"lambda_p", pr.lambda_p}, {"lambda_p2", pr.lambda_p2}, {"betas", b},
                    {"angles", {ang[0], ang[1]}}, {"modulus_defect", rep.max_modulus_defect},
                    {"pass", rep.pass}});
    csv << s.p << ',' << fmt(pr.lambda_p) << ',' << fmt(pr.lambda_p2) << ',' << fmt(ang[0]) << ','
        << fmt(ang[1]) << ',' << fmt(rep.max_modulus_defect) << ',' << (rep.pass ? "true" : "false") << "\r\n";
  }
  if (r.csv()) return r.emit(csv.str());
  json j{{"meta", r.meta("satake", src)}, {"primes", rows}};
  r.emit_json(std::move(j));
}

inline void cmd_locals(Runner& r, prime_t only) {
  const auto src = r.load_source();
  json rows = json::array();
  std::ostringstream csv;
  csv << "p,role,degree,re,im\r\n";
  auto add_csv = [&](prime_t p, const char* role, const std::vector<cplx>& c) {
    for (std::size_t d = 0; d < c.size(); ++d)
      csv << p << ',' << role << ',' << d << ',' << fmt(c[d].real()) << ',' << fmt(c[d].imag()) << "\r\n";
  };
  auto arr = [](const std::vector<cplx>& c) {
    json a = json::array();
    for (const cplx& z : c) a.push_back(cplx_json(z));
    return a;
  };
  bool found = false;
  for (const auto& s : src.data.locals) {
    if (only != 0 && s.p != only) continue;
    found = true;
    const auto sp = spinor_inverse(s);
    const auto rk = rankin_inverse(s);
    const auto hc = h_construct(s, r.c_.tau_poly);
    rows.push_back({{"p", s.p},
                    {"spinor_inverse", arr(sp.coeffs)},
                    {"rankin_inverse", arr(rk.coeffs)},
                    {"h", arr(hc.h.coeffs)},
                    {"h_linear_defect", hc.linear_defect},
                    {"h_tail_defect", hc.tail_defect},
                    {"h_observed_degree", hc.observed_degree},
                    {"h_at_one", hc.h.evaluate(cplx(1.0 / static_cast<double>(s.p))).real()}});
    add_csv(s.p, "spinor_inverse", sp.coeffs);
    add_csv(s.p, "rankin_inverse", rk.coeffs);
    add_csv(s.p, "h", hc.h.coeffs);
  }
  if (!found) throw usage_error("--prime " + std::to_string(only) + " is not a data prime");
  if (r.csv()) return r.emit(csv.str());
  r.emit_json({{"meta", r.meta("locals", src)}, {"locals", rows}});
}

inline void cmd_expand(Runner& r, const std::string& series) {
  const auto kind = parse_kind(series);
  const auto src = r.load_source();
  const auto t = build_table(r.model(src), kind, r.c_.max_n);
  if (r.csv()) {
    std::ostringstream os;
    write_csv(os, t);
    return r.emit(os.str());
  }
  json j{{"meta", r.meta("expand", src)}, {"series", t.name}, {"N", t.N}};
  j["coefficients"] = std::vector<double>(t.coeffs.begin() + 1, t.coeffs.end());
  r.emit_json(std::move(j));
}

inline void cmd_eval(Runner& r, const std::string& series, const std::vector<std::string>& points) {
  const auto kind = parse_kind(series);
  std::vector<cplx> ss;
  for (const auto& p : points) ss.push_back(parse_point(p));
  if (ss.empty()) ss.push_back(cplx(2.0));
  const auto src = r.load_source();
  const auto m = r.model(src);
  const auto t = build_table(m, kind, r.c_.max_n);
  json rows = json::array();
  std::ostringstream csv;
  csv << "re_s,im_s,re_value,im_value,tail_bound,re_closed_form,im_closed_form,difference\r\n";
  for (cplx s : ss) {
    SeriesValue v;
    try {
      v = eval_series(t, s);
    } catch (const outside_convergence& e) {
      throw usage_error(e.what());
    }
    const cplx closed = m.evaluate(kind, s);
    const double diff = std::abs(v.value - closed);
    rows.push_back({{"s", cplx_json(s)}, {"value", cplx_json(v.value)}, {"tail_bound", v.tail_bound},
                    {"closed_form", cplx_json(closed)}, {"difference", diff},
                    {"within_bound", diff <= v.tail_bound}});
    csv << fmt(s.real()) << ',' << fmt(s.imag()) << ',' << fmt(v.value.real()) << ','
        << fmt(v.value.imag()) << ',' << fmt(v.tail_bound) << ',' << fmt(closed.real()) << ','
        << fmt(closed.imag()) << ',' << fmt(diff) << "\r\n";
  }
  if (r.csv()) return r.emit(csv.str());
  r.emit_json({{"meta", r.meta("eval", src)}, {"series", to_string(kind)}, {"values", rows}});
}

inline void cmd_partials(Runner& r, const std::string& series, int points) {
  const auto kind = parse_kind(series);
  const auto src = r.load_source();
  const auto m = r.model(src);
  const auto t = build_table(m, kind, r.c_.max_n);
  const auto grid = log_grid(t.N, points);
  if (r.csv()) {
    std::ostringstream os;
    write_ratio_csv(os, t, grid);
    return r.emit(os.str());
  }
  const auto A = prefix_sums(t);
  json pts = json::array();
  for (auto x : grid) pts.push_back({x, A[x], A[x] / static_cast<double>(x)});
  json j{{"meta", r.meta("partials", src)}, {"series", to_string(kind)}};
  if (kind == series_kind::d2 && t.N >= 1000) j["c_F"] = estimate_json(estimate_cF(t, m));
  j["points"] = pts;
  r.emit_json(std::move(j));
}

struct PerronArgs {
  double x = 0.0;
  double eta = 0.05;
  double T = 200.0;
  double S = 0.0;  // 0: max(2, x^(1/32))
  bool asymptotic = false;
  int weight = 0;  // 0: dataset weight
  double A = 1.0;
  double convexity_constant = 1.0;
};

inline PerronConfig perron_config(const PerronArgs& a) {
  if (a.asymptotic) return PerronConfig::asymptotic(a.x, a.eta);
  const double S = a.S > 0.0 ? a.S : std::max(2.0, std::pow(a.x, 1.0 / 32.0));
  return PerronConfig::with_window(a.x, a.eta, a.T, S);
}

inline void cmd_perron(Runner& r, const PerronArgs& a) {
  const auto src = r.load_source();
  PerronConfig cfg;
  try {
    cfg = perron_config(a);
    cfg.validate_strip();
  } catch (const parameter_domain& e) {
    throw usage_error(e.what());
  }
  if (!(static_cast<double>(r.c_.max_n) > a.x)) throw usage_error("--max-n must exceed --x");
  const auto m = r.model(src);
  const auto d2 = build_table(m, series_kind::d2, r.c_.max_n);
  const int k = a.weight > 0 ? a.weight : src.data.weight;
  const auto rep = perron_report(m, d2, cfg, k, a.A, a.convexity_constant);
  r.emit_json({{"meta", r.meta("perron", src)}, {"weight", k}, {"perron", perron_json(rep)}});
}

struct ConvexityArgs {
  int weight = 0;
  std::vector<double> sigmas{1.05, 1.1, 1.25};
  std::vector<int> ks{50, 100, 200, 400};
  std::vector<double> ts{10, 20, 40, 80};
};

inline void cmd_convexity(Runner& r, const ConvexityArgs& a) {
  const auto src = r.load_source(false);
  const int k = a.weight > 0 ? a.weight : (src.kind.empty() ? 20 : src.data.weight);
  std::vector<SlopeFit> fits;
  try {
    for (double s : a.sigmas) {
      fits.push_back(slope_in_k(s, 0.0, a.ks));
      fits.push_back(slope_in_t(s, k, a.ts));
    }
  } catch (const parameter_domain& e) {
    throw usage_error(e.what());
  }
  if (r.csv()) {
    std::ostringstream os;
    write_slope_csv(os, fits);
    return r.emit(os.str());
  }
  json fj = json::array();
  for (const auto& f : fits) fj.push_back(slope_json(f));
  const auto g = rankin_gamma_factor(k);
  json crit = json::array();
  for (double t : {0.0, 1.0, 10.0, 100.0}) crit.push_back({t, completed_ratio(g, cplx(0.5, t))});
  r.emit_json({{"meta", r.meta("convexity", src)}, {"weight", k}, {"fits", fj}, {"critical_line", crit}});
}

struct BoundCounts {
  std::uint64_t lambda_violations = 0;
  std::uint64_t spinor_violations = 0;
  double worst_lambda_ratio = 0.0;
  double worst_spinor_ratio = 0.0;
};

inline BoundCounts bound_counts(const CoefficientTable& d1, const CoefficientTable& z) {
  BoundCounts rc;
  for (std::uint64_t n = 1; n <= d1.N; ++n) {
    const double lb = trivial_lambda_bound(n);
    const double db = static_cast<double>(divisor_d4(n));
    if (std::abs(d1.coeffs[n]) > lb * (1.0 + 1e-9)) ++rc.lambda_violations;
    if (std::abs(z.coeffs[n]) > db * (1.0 + 1e-9)) ++rc.spinor_violations;
    rc.worst_lambda_ratio = std::max(rc.worst_lambda_ratio, std::abs(d1.coeffs[n]) / lb);
    rc.worst_spinor_ratio = std::max(rc.worst_spinor_ratio, std::abs(z.coeffs[n]) / db);
  }
  return rc;
}

inline json bound_json(const BoundCounts& rc) {
  return {{"lambda_violations", rc.lambda_violations},
          {"spinor_violations", rc.spinor_violations},
          {"worst_lambda_ratio", rc.worst_lambda_ratio},
          {"worst_spinor_ratio", rc.worst_spinor_ratio},
          {"pass", rc.lambda_violations == 0 && rc.spinor_violations == 0}};
}

inline json density_block(const CoefficientTable& d1, double alpha, std::ostringstream* csv) {
  json rows = json::array();
  for (auto X : decades(d1.N))
    for (const auto& rep : {density_sqrt_d(d1, X), density_sqrt_log(d1, X), bounded_away_count(d1, X, alpha)}) {
      rows.push_back(density_json(rep));
      if (csv) *csv << rep.X << ',' << rep.predicate << ',' << rep.count << ',' << fmt(rep.density) << "\r\n";
    }
  return rows;
}

inline json gap_json(const ZeroGapReport& g) {
  return {{"N", g.N}, {"zero_count", g.zero_count}, {"max_gap", g.max_gap},
          {"gap_start", g.gap_start}, {"zero_tol", g.zero_tol}};
}

inline void cmd_bounds(Runner& r, double alpha) {
  const auto src = r.load_source();
  const auto m = r.model(src);
  const auto d1 = build_table(m, series_kind::d1, r.c_.max_n);
  const auto z = build_table(m, series_kind::z, r.c_.max_n);
  std::ostringstream csv;
  csv << "X,predicate,count,density\r\n";
  const json dens = density_block(d1, alpha, &csv);
  if (r.csv()) return r.emit(csv.str());
  const auto rc = bound_counts(d1, z);
  json j{{"meta", r.meta("bounds", src)}, {"coefficient_bounds", bound_json(rc)}, {"alpha", alpha},
         {"densities", dens}, {"zero_gaps", gap_json(zero_gaps(d1))}};
  r.emit_json(std::move(j));
  if (rc.lambda_violations || rc.spinor_violations) throw validation_failed("coefficient bound violations");
}

inline void cmd_report(Runner& r) {
  const auto src = r.load_source();
  const auto m = r.model(src);
  const std::uint64_t N = r.c_.max_n;
  bool all_pass = true;
  json j{{"meta", r.meta("report", src)}};

  // Satake round trip and Ramanujan check.
  {
    double rt = 0.0, mod = 0.0;
    for (const auto& s : src.data.locals) {
      rt = std::max(rt, permutation_distance(recover_satake(hecke_from(s)).betas, s.betas));
      mod = std::max(mod, validate_ramanujan(s, r.c_.tau_unit).max_modulus_defect);
    }
    const bool pass = rt < 1e-8 && mod <= r.c_.tau_unit;
    all_pass &= pass;
    j["satake"] = {{"primes", src.data.locals.size()}, {"roundtrip_error", rt},
                   {"max_modulus_defect", mod}, {"pass", pass}};
  }
  // H_p polynomiality.
  {
    double lin = 0.0, tail = 0.0;
    int deg = 0;
    for (const auto& s : src.data.locals) {
      const auto c = h_construct(s, r.c_.tau_poly);
      lin = std::max(lin, c.linear_defect);
      tail = std::max(tail, c.tail_defect);
      deg = std::max(deg, c.observed_degree);
    }
    const bool pass = lin < 1e-9 && tail < 1e-8;
    all_pass &= pass;
    j["h_polynomials"] = {{"max_linear_coefficient", lin}, {"max_tail_coefficient", tail},
                          {"max_observed_degree", deg}, {"pass", pass}};
  }

  const auto d1 = build_table(m, series_kind::d1, N);
  const auto d2 = build_table(m, series_kind::d2, N);
  const auto z = build_table(m, series_kind::z, N);
  const auto l = build_table(m, series_kind::l, N);
  const auto h = build_table(m, series_kind::h, N);

  {
    const auto conv = dirichlet_convolution(h, l, N);
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n)
      worst = std::max(worst, std::abs(conv[n] - d2.coeffs[n]) / std::max(1.0, std::abs(d2.coeffs[n])));
    const bool pass = worst < 1e-8;
    all_pass &= pass;
    j["factorization"] = {{"N", N}, {"max_relative_error", worst}, {"pass", pass}};
  }
  {
    const std::uint64_t lim = std::min<std::uint64_t>(N, 10000);
    json tabs;
    bool pass = true;
    for (const auto* t : {&d1, &d2, &z, &l, &h}) {
      const double d = multiplicativity_defect(*t, lim);
      tabs[t->name] = d;
      pass &= d < 1e-9;
    }
    all_pass &= pass;
    j["multiplicativity"] = {{"limit", lim}, {"defects", tabs}, {"pass", pass}};
  }
  {
    const auto rc = bound_counts(d1, z);
    all_pass &= rc.lambda_violations == 0 && rc.spinor_violations == 0;
    j["coefficient_bounds"] = bound_json(rc);
  }
  {
    json pts = json::array();
    bool pass = true;
    double worst_tail = 0.0;
    for (int i = 0; i < 20; ++i) {
      const cplx s(1.2 + 1.8 * i / 19.0, 3.0 * (i - 10));
      const auto zv = eval_series(z, s);
      const auto dv = eval_series(d1, s);
      const auto zeta2 = zeta_checked(2.0 * s + 1.0);
      const double bound = zv.tail_bound + std::abs(zeta2.value) * dv.tail_bound +
                           std::abs(dv.value) * zeta2.error_bound;
      const double diff = std::abs(zv.value - zeta2.value * dv.value);
      pass &= diff <= bound;
      worst_tail = std::max({worst_tail, zv.tail_bound, dv.tail_bound});
      pts.push_back({{"s", cplx_json(s)}, {"difference", diff}, {"combined_bound", bound}});
    }
    all_pass &= pass;
    j["spinor_identity"] = {{"points", pts}, {"max_tail_bound", worst_tail}, {"pass", pass}};
  }
  if (N >= 1000) j["c_F"] = estimate_json(estimate_cF(d2, m));
  {
    std::vector<prime_t> cuts;
    for (prime_t c = 10; c < src.data.max_prime; c *= 10) cuts.push_back(c);
    cuts.push_back(src.data.max_prime);
    json steps = json::array();
    for (const auto& s : h_product_convergence(m, cuts))
      steps.push_back({{"P", s.P}, {"product", s.product}, {"difference", s.difference}});
    j["h_product"] = steps;
  }
  j["densities"] = density_block(d1, 1.0 / 16.0, nullptr);
  j["zero_gaps"] = gap_json(zero_gaps(d1));
  if (N >= 200) {
    const double x = std::min(500.5, std::floor(static_cast<double>(N) / 20.0) + 0.5);
    const auto cfg = PerronConfig::with_window(x, 0.05, 200.0, 2.0);
    const auto rep = perron_report(m, d2, cfg, src.data.weight, 1.0);
    const bool pass = rep.achieved_error <= rep.truncation_budget;
    all_pass &= pass;
    json pj = perron_json(rep);
    pj["pass"] = pass;
    j["perron"] = pj;
  }
  {
    const auto fk = slope_in_k(1.1, 0.0, {50, 100, 200, 400});
    const auto ft = slope_in_t(1.1, src.data.weight, {10, 20, 40, 80});
    const auto g = rankin_gamma_factor(src.data.weight);
    double crit = 0.0;
    for (double t : {0.0, 1.0, 14.0, 100.0}) crit = std::max(crit, std::abs(completed_ratio(g, cplx(0.5, t)) - 1.0));
    const bool pass = fk.relative_error() < 0.1 && ft.relative_error() < 0.1 && crit < 1e-10;
    all_pass &= pass;
    j["convexity"] = {{"k_fit", slope_json(fk)}, {"t_fit", slope_json(ft)},
                      {"critical_line_defect", crit}, {"pass", pass}};
  }
  {
    const auto b = error_budget(PerronConfig::asymptotic(std::pow(2.0, 40), 0.05), src.data.weight, 1.0);
    bool pass = std::abs(b.k_exponent - 5.0 / 16.0) < 1e-12;
    for (double e : {b.e1, b.e2, b.e3, b.e4}) pass &= std::abs(e - (31.0 / 32.0 + 0.05)) < 1e-12;
    all_pass &= pass;
    json bj = budget_json(b);
    bj["eta"] = 0.05;
    bj["pass"] = pass;
    j["error_budget"] = bj;
  }
  j["status"] = all_pass ? "pass" : "fail";
  r.emit_json(std::move(j));
  if (!all_pass) throw validation_failed("report: at least one invariant failed");
}

// ---- entry point ----

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments on spinor, Rankin-Selberg and naive convolution Dirichlet series"};
  app.require_subcommand(1);
  Runner r(out, err);

  auto common = [&](CLI::App* sub) {
    auto* d = sub->add_option("--dataset", r.c_.dataset, "JSON-lines eigenvalue table");
    auto* s = sub->add_option("--synthetic", r.c_.synthetic, "Synthetic data: P,seed");
    d->excludes(s);
    sub->add_option("--max-n", r.c_.max_n, "Coefficient table size N")->check(CLI::Range(1ULL, 100000000ULL));
    sub->add_option("--out", r.c_.out, "Output file (written atomically); stdout if absent");
    sub->add_option("--format", r.c_.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tau-unit", r.c_.tau_unit, "Unit-circle tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tau-poly", r.c_.tau_poly, "H_p polynomiality tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--no-timestamp", r.c_.no_timestamp, "Omit generated_at from JSON output");
  };

  std::function<void()> action;

  auto* satake = app.add_subcommand("satake", "Satake parameters per prime");
  common(satake);
  satake->callback([&] { action = [&] { cmd_satake(r); }; });

  prime_t only = 0;
  auto* locals = app.add_subcommand("locals", "Local polynomials and H_p per prime");
  common(locals);
  locals->add_option("--prime", only, "Restrict to one prime");
  locals->callback([&] { action = [&] { cmd_locals(r, only); }; });

  std::string series = "d2";
  auto* expand = app.add_subcommand("expand", "Dirichlet coefficient table");
  common(expand);
  expand->add_option("--series", series, "d1, d2, z, l or h");
  expand->callback([&] { action = [&] { cmd_expand(r, series); }; });

  std::vector<std::string> points;
  auto* eval = app.add_subcommand("eval", "Truncated series values with tail bounds");
  common(eval);
  eval->add_option("--series", series, "d1, d2, z, l or h");
  eval->add_option("--s", points, "Point re or re,im (repeatable)");
  eval->callback([&] { action = [&] { cmd_eval(r, series, points); }; });

  int grid_points = 200;
  auto* partials = app.add_subcommand("partials", "A(x) and A(x)/x on a log grid, residue fit");
  common(partials);
  partials->add_option("--series", series, "d1, d2, z, l or h");
  partials->add_option("--points", grid_points, "Grid size")->check(CLI::Range(2, 100000));
  partials->callback([&] { action = [&] { cmd_partials(r, series, grid_points); }; });

  PerronArgs pa;
  auto* perron = app.add_subcommand("perron", "Truncated Perron experiment for D2");
  common(perron);
  perron->add_option("--x", pa.x, "Cutoff x")->required();
  perron->add_option("--eta", pa.eta, "sigma = 1 + eta, delta = 15/16 + eta");
  perron->add_option("--T", pa.T, "Contour height");
  perron->add_option("--S", pa.S, "Window parameter (default max(2, x^(1/32)))");
  perron->add_flag("--asymptotic", pa.asymptotic, "Use T = x^(1/16), S = x^(1/32)");
  perron->add_option("--weight", pa.weight, "Weight k for the budget (default: dataset weight)");
  perron->add_option("--A", pa.A, "Bound for H on the shifted line");
  perron->add_option("--convexity-constant", pa.convexity_constant, "Implied constant of the convexity bound");
  perron->callback([&] { action = [&] { cmd_perron(r, pa); }; });

  ConvexityArgs ca;
  auto* convexity = app.add_subcommand("convexity", "Slopes of the completed gamma ratio");
  common(convexity);
  convexity->add_option("--weight", ca.weight, "Weight k (default: dataset weight or 20)");
  convexity->add_option("--sigma", ca.sigmas, "Real parts");
  convexity->add_option("--ks", ca.ks, "Weight grid");
  convexity->add_option("--ts", ca.ts, "Height grid");
  convexity->callback([&] { action = [&] { cmd_convexity(r, ca); }; });

  double alpha = 1.0 / 16.0;
  auto* bounds = app.add_subcommand("bounds", "Coefficient bounds, density counts and zero gaps");
  common(bounds);
  bounds->add_option("--alpha", alpha, "Threshold for the bounded-away count");
  bounds->callback([&] { action = [&] { cmd_bounds(r, alpha); }; });

  auto* report = app.add_subcommand("report", "Every invariant suite in one JSON bundle");
  common(report);
  report->callback([&] { action = [&] { cmd_report(r); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    action();
    return 0;
  } catch (const usage_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const validation_failed& e) {
    err << "validation failure: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const rsconv::error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rsconv::cli
