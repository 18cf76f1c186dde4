#pragma once

// Eigenvalue datasets: JSON-lines files and seeded synthetic generation.
//
// File layout, one JSON object per line:
//
//   {"label": "...", "weight": 20, "normalization": "raw" | "normalized", "max_prime": 97}
//   {"p": "2", "lambda_p": "-0.43...", "lambda_p2": "0.71..."}
//   ...
//
// Values may be JSON numbers or decimal strings; strings keep full precision.
// Raw values are lambda_F(p) and lambda_F(p^2); loading divides them by
// p^{k-3/2} and p^{2(k-3/2)}.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsconv/arith.hpp"
#include "rsconv/errors.hpp"
#include "rsconv/satake.hpp"

namespace rsconv {

enum class normalization { raw, normalized };

inline const char* to_string(normalization n) { return n == normalization::raw ? "raw" : "normalized"; }

struct EigenformDataset {
  std::string label;
  int weight = 20;
  prime_t max_prime = 2;
  normalization norm = normalization::normalized;
  std::vector<HeckePair> pairs;  // every prime <= max_prime, increasing

  // Not part of equality: derived on load or generation.
  std::vector<SatakeLocal> locals;
  std::vector<std::string> warnings;
  std::vector<prime_t> ramanujan_failures;

  bool ok() const { return ramanujan_failures.empty(); }

  friend bool operator==(const EigenformDataset& a, const EigenformDataset& b) {
    return a.label == b.label && a.weight == b.weight && a.max_prime == b.max_prime &&
           a.norm == b.norm && a.pairs == b.pairs;
  }
};

namespace detail {

inline double json_real(const nlohmann::json& v, const char* key, std::size_t line) {
  if (!v.contains(key)) throw parse_error(line, std::string("missing field \"") + key + "\"");
  const auto& f = v.at(key);
  if (f.is_number()) return f.get<double>();
  if (!f.is_string()) throw parse_error(line, std::string("field \"") + key + "\" is not a number");
  const std::string s = f.get<std::string>();
  double out = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(out))
    throw parse_error(line, std::string("field \"") + key + "\" = \"" + s + "\" is not a finite decimal");
  return out;
}

inline std::uint64_t json_prime(const nlohmann::json& v, const char* key, std::size_t line) {
  const double d = json_real(v, key, line);
  if (!(d >= 2.0 && d < 9.007199254740992e15) || std::floor(d) != d)
    throw parse_error(line, std::string("field \"") + key + "\" is not an integer >= 2");
  return static_cast<std::uint64_t>(d);
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Recovers Satake data at every prime, collecting Ramanujan failures instead of
// throwing so that the whole table can be reported.
inline void attach_locals(EigenformDataset& d, const RecoveryOptions& opts = {}) {
  d.locals.clear();
  d.ramanujan_failures.clear();
  for (const auto& pr : d.pairs) {
    try {
      auto s = recover_satake(pr, opts, &d.warnings);
      s.source = satake_source::ingested;
      const auto rep = validate_ramanujan(s, opts.warn_limit);
      if (!rep.pass) {
        d.ramanujan_failures.push_back(pr.p);
        d.warnings.push_back("p=" + std::to_string(pr.p) + ": fails the Ramanujan check");
        continue;
      }
      d.locals.push_back(s);
    } catch (const roots_off_unit_circle& e) {
      d.ramanujan_failures.push_back(pr.p);
      d.warnings.push_back(std::string(e.what()) +
                           " (Saito-Kurokawa lift or raw/normalized mismatch?)");
    } catch (const quartic_solve_failure& e) {
      d.ramanujan_failures.push_back(pr.p);
      d.warnings.push_back(e.what());
    }
  }
}

inline EigenformDataset parse_dataset(std::istream& in, const RecoveryOptions& opts = {}) {
  EigenformDataset d;
  std::map<prime_t, HeckePair> seen;
  std::string text;
  std::size_t line = 0;
  bool header = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json v;
    try {
      v = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw parse_error(line, std::string("invalid JSON: ") + e.what());
    }
    if (!v.is_object()) throw parse_error(line, "record is not a JSON object");
    if (!header) {
      for (const char* key : {"label", "weight", "normalization", "max_prime"})
        if (!v.contains(key)) throw parse_error(line, std::string("header lacks \"") + key + "\"");
      if (!v["label"].is_string()) throw parse_error(line, "\"label\" must be a string");
      d.label = v["label"].get<std::string>();
      const double w = detail::json_real(v, "weight", line);
      if (std::floor(w) != w || w < 1.0 || w > 1e6) throw parse_error(line, "\"weight\" must be a positive integer");
      d.weight = static_cast<int>(w);
      const std::string norm = v["normalization"].is_string() ? v["normalization"].get<std::string>() : "";
      if (norm == "raw") d.norm = normalization::raw;
      else if (norm == "normalized") d.norm = normalization::normalized;
      else throw parse_error(line, "\"normalization\" must be \"raw\" or \"normalized\"");
      d.max_prime = detail::json_prime(v, "max_prime", line);
      header = true;
      continue;
    }
    HeckePair pr;
    pr.p = detail::json_prime(v, "p", line);
    if (!is_prime(pr.p)) throw parse_error(line, std::to_string(pr.p) + " is not prime");
    if (pr.p > d.max_prime)
      throw parse_error(line, "prime " + std::to_string(pr.p) + " exceeds max_prime " + std::to_string(d.max_prime));
    pr.lambda_p = detail::json_real(v, "lambda_p", line);
    pr.lambda_p2 = detail::json_real(v, "lambda_p2", line);
    if (!seen.emplace(pr.p, pr).second) throw duplicate_prime(pr.p);
  }
  if (!header) throw parse_error(line, "no header record");
  for (prime_t p : primes_up_to(d.max_prime))
    if (!seen.count(p)) throw gap_in_primes(p);

  const double shift = d.weight - 1.5;
  for (auto& [p, pr] : seen) {
    if (d.norm == normalization::raw) {
      pr.lambda_p /= std::pow(static_cast<double>(p), shift);
      pr.lambda_p2 /= std::pow(static_cast<double>(p), 2.0 * shift);
    }
    d.pairs.push_back(pr);
  }
  d.norm = normalization::normalized;
  attach_locals(d, opts);
  return d;
}

inline EigenformDataset load_dataset(const std::string& path, const RecoveryOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(0, "cannot open " + path);
  return parse_dataset(in, opts);
}

// Always writes normalized values.
inline void save_dataset(std::ostream& os, const EigenformDataset& d) {
  nlohmann::ordered_json h;
  h["label"] = d.label;
  h["weight"] = d.weight;
  h["normalization"] = "normalized";
  h["max_prime"] = d.max_prime;
  os << h.dump() << '\n';
  for (const auto& pr : d.pairs) {
    nlohmann::ordered_json r;
    r["p"] = std::to_string(pr.p);
    r["lambda_p"] = detail::fmt17(pr.lambda_p);
    r["lambda_p2"] = detail::fmt17(pr.lambda_p2);
    os << r.dump() << '\n';
  }
}

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Angles (theta_1, theta_2) in [0, pi]^2 from the Haar measure of USp(4),
// density proportional to (cos t1 - cos t2)^2 sin^2 t1 sin^2 t2, by rejection.
inline std::array<double, 2> sato_tate_angles(std::mt19937_64& rng) {
  constexpr double pi = std::numbers::pi;
  for (;;) {
    const double t1 = pi * unit_uniform(rng), t2 = pi * unit_uniform(rng);
    const double c = std::cos(t1) - std::cos(t2);
    const double w = c * c * std::sin(t1) * std::sin(t1) * std::sin(t2) * std::sin(t2);
    if (4.0 * unit_uniform(rng) < w) return {t1, t2};
  }
}

inline EigenformDataset generate_synthetic(prime_t P, std::uint64_t seed, int weight = 20) {
  if (P < 2) throw parameter_domain("generate_synthetic: P must be >= 2");
  EigenformDataset d;
  d.label = "synthetic-P" + std::to_string(P) + "-seed" + std::to_string(seed);
  d.weight = weight;
  d.max_prime = P;
  d.norm = normalization::normalized;
  std::mt19937_64 rng(seed);
  for (prime_t p : primes_up_to(P)) {
    const auto [t1, t2] = sato_tate_angles(rng);
    const auto s = synthetic_satake(p, t1, t2 - t1);
    d.locals.push_back(s);
    d.pairs.push_back(hecke_from(s));
  }
  return d;
}

}  // namespace rsconv
