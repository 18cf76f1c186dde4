#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rsconv/ingest.hpp"

using namespace rsconv;

namespace {

EigenformDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in);
}

const std::string header5 = R"({"label":"t","weight":20,"normalization":"normalized","max_prime":5})";

}  // namespace

TEST(Load, ThreePrimes) {
  const auto d = parse(header5 + "\n" +
                       R"({"p":"2","lambda_p":"0.5","lambda_p2":"-0.25"})" "\n"
                       R"({"p":3,"lambda_p":-1.0,"lambda_p2":0.1})" "\n"
                       "\n"
                       R"({"p":"5","lambda_p":"0","lambda_p2":"-1.2"})" "\n");
  ASSERT_EQ(d.pairs.size(), 3u);
  EXPECT_EQ(d.pairs[1].p, 3u);
  EXPECT_EQ(d.pairs[0].lambda_p, 0.5);
  EXPECT_EQ(d.locals.size(), 3u);
  EXPECT_TRUE(d.ok());
  EXPECT_EQ(d.norm, normalization::normalized);
}

TEST(Load, Errors) {
  EXPECT_THROW(parse(header5 + "\n" + R"({"p":"2","lambda_p":"0","lambda_p2":"0"})" "\n"
                     R"({"p":"5","lambda_p":"0","lambda_p2":"0"})"),
               gap_in_primes);
  EXPECT_THROW(parse(header5 + "\n" + R"({"p":"2","lambda_p":"0","lambda_p2":"0"})" "\n"
                     R"({"p":"2","lambda_p":"0","lambda_p2":"0"})"),
               duplicate_prime);
  try {
    parse(header5 + "\n" + R"({"p":"2","lambda_p":"0","lambda_p2":"0"})" "\n{oops\n");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line, 3u);
  }
  try {
    parse(header5 + "\n" + R"({"p":"4","lambda_p":"0","lambda_p2":"0"})");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line, 2u);
  }
  EXPECT_THROW(parse(R"({"label":"t","weight":20})"), parse_error);
  EXPECT_THROW(parse(header5 + "\n" + R"({"p":"2","lambda_p":"abc","lambda_p2":"0"})"), parse_error);
  EXPECT_THROW(parse(""), parse_error);
  EXPECT_THROW(load_dataset("/nonexistent/file.jsonl"), parse_error);
}

TEST(Load, RawNormalization) {
  const double s = std::pow(2.0, 18.5);
  std::ostringstream text;
  text << R"({"label":"raw","weight":20,"normalization":"raw","max_prime":2})" << "\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, R"({"p":"2","lambda_p":"%.17g","lambda_p2":"%.17g"})", 0.5 * s, -0.75 * s * s);
  text << buf << "\n";
  const auto d = parse(text.str());
  EXPECT_NEAR(d.pairs[0].lambda_p, 0.5, 1e-15);
  EXPECT_NEAR(d.pairs[0].lambda_p2, -0.75, 1e-15);
  EXPECT_EQ(d.norm, normalization::normalized);
}

TEST(Load, RamanujanFailureIsReportedNotThrown) {
  const auto d = parse(R"({"label":"sk","weight":20,"normalization":"normalized","max_prime":3})" "\n"
                       R"({"p":"2","lambda_p":"10","lambda_p2":"40"})" "\n"
                       R"({"p":"3","lambda_p":"0","lambda_p2":"-1.3333333333333333"})" "\n");
  EXPECT_FALSE(d.ok());
  ASSERT_EQ(d.ramanujan_failures.size(), 1u);
  EXPECT_EQ(d.ramanujan_failures[0], 2u);
  EXPECT_FALSE(d.warnings.empty());
  EXPECT_EQ(d.locals.size(), 1u);
}

TEST(Synthetic, Deterministic) {
  EXPECT_EQ(generate_synthetic(10, 42), generate_synthetic(10, 42));
  EXPECT_FALSE(generate_synthetic(10, 42) == generate_synthetic(10, 43));
  const auto one = generate_synthetic(2, 9);
  ASSERT_EQ(one.pairs.size(), 1u);
  EXPECT_EQ(one.pairs[0].p, 2u);
  EXPECT_THROW(generate_synthetic(1, 0), parameter_domain);
}

TEST(Synthetic, RamanujanDefect) {
  const auto d = generate_synthetic(2000, 7);
  for (const auto& s : d.locals) EXPECT_LT(validate_ramanujan(s).max_modulus_defect, 1e-12);
}

TEST(Synthetic, HaarSecondMoment) {
  // E[lambda_p^2] = 1 and E[lambda_p] = 0 under the USp(4) Haar measure.
  std::mt19937_64 rng(1);
  double m1 = 0.0, m2 = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const auto [t1, t2] = sato_tate_angles(rng);
    const double l = 2.0 * std::cos(t1) + 2.0 * std::cos(t2);
    m1 += l / n;
    m2 += l * l / n;
  }
  EXPECT_NEAR(m1, 0.0, 0.03);
  EXPECT_NEAR(m2, 1.0, 0.05);
}

TEST(Synthetic, UnitUniformMapping) {
  std::mt19937_64 a(123), b(123);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(unit_uniform(a), static_cast<double>(b() >> 11) / 9007199254740992.0);
}

TEST(Save, RoundTripExact) {
  const auto d = generate_synthetic(1000, 42);
  std::ostringstream os;
  save_dataset(os, d);
  const auto back = parse(os.str());
  EXPECT_EQ(back, d);
  EXPECT_TRUE(back.ok());

  // Loading an already-normalized file changes nothing.
  std::ostringstream again;
  save_dataset(again, back);
  EXPECT_EQ(again.str(), os.str());
  EXPECT_EQ(parse(again.str()), back);
}
