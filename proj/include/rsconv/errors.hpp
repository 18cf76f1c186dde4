#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsconv {

// Base of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Recovered Satake roots are off the unit circle beyond the warning band.
class roots_off_unit_circle : public error {
 public:
  roots_off_unit_circle(std::uint64_t p, std::vector<double> moduli)
      : error(describe(p, moduli)), prime(p), moduli(std::move(moduli)) {}

  std::uint64_t prime;
  std::vector<double> moduli;

 private:
  static std::string describe(std::uint64_t p, const std::vector<double>& m) {
    std::string s = "Satake roots at p=" + std::to_string(p) +
                    " are off the unit circle; moduli:";
    for (double v : m) s += " " + std::to_string(v);
    return s;
  }
};

class quartic_solve_failure : public error {
 public:
  using error::error;
};

class polynomiality_violation : public error {
 public:
  polynomiality_violation(std::uint64_t p, int degree, double magnitude)
      : error("H_p polynomiality violated at p=" + std::to_string(p) +
              ": |coefficient of X^" + std::to_string(degree) +
              "| = " + std::to_string(magnitude)),
        prime(p),
        degree(degree),
        magnitude(magnitude) {}

  std::uint64_t prime;
  int degree;
  double magnitude;
};

class missing_prime : public error {
 public:
  explicit missing_prime(std::uint64_t p)
      : error("no local factor supplied for prime " + std::to_string(p)),
        prime(p) {}
  std::uint64_t prime;
};

class insufficient_order : public error {
 public:
  using error::error;
};

class outside_convergence : public error {
 public:
  using error::error;
};

class truncation_exceeded : public error {
 public:
  using error::error;
};

class pole_hit : public error {
 public:
  using error::error;
};

class parameter_domain : public error {
 public:
  using error::error;
};

class quadrature_non_convergence : public error {
 public:
  using error::error;
};

class insufficient_data : public error {
 public:
  using error::error;
};

// Dataset ingestion failures.
class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

class gap_in_primes : public error {
 public:
  explicit gap_in_primes(std::uint64_t p)
      : error("dataset is missing prime " + std::to_string(p)), prime(p) {}
  std::uint64_t prime;
};

class duplicate_prime : public error {
 public:
  explicit duplicate_prime(std::uint64_t p)
      : error("dataset lists prime " + std::to_string(p) + " twice"),
        prime(p) {}
  std::uint64_t prime;
};

}  // namespace rsconv
