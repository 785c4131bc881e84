#include "oracle.hpp"
#include "weilsum/cyclotomic.hpp"

#include <gtest/gtest.h>

using namespace weilsum;

namespace {

CycInt make(std::uint32_t p, std::vector<long long> c) {
  std::vector<BigInt> b(c.begin(), c.end());
  return CycInt(p, std::move(b));
}

CycInt random_cyc(std::mt19937_64& rng, std::uint32_t p, int bound) {
  std::uniform_int_distribution<int> coef(-bound, bound);
  std::vector<BigInt> c(p - 1);
  for (auto& x : c) x = coef(rng);
  return CycInt(p, std::move(c));
}

const CycInt pi_of(std::uint32_t p) { return CycInt(p, BigInt(1)) - CycInt::zeta_power(p, 1); }

bool close(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

}  // namespace

TEST(CycInt, TraceHistogram) {
  const std::vector<std::uint64_t> h1{3, 3, 3}, h2{5, 1, 1}, h3{6, 2};
  EXPECT_TRUE(CycInt::from_trace_histogram(3, h1).is_zero());
  EXPECT_EQ(CycInt::from_trace_histogram(3, h2), make(3, {4, 0}));
  EXPECT_EQ(CycInt::from_trace_histogram(3, h2).as_integer(), std::optional<BigInt>(4));
  EXPECT_EQ(CycInt::from_trace_histogram(2, h3).as_integer(), std::optional<BigInt>(4));
  const std::vector<std::uint64_t> wrong{1, 2};
  EXPECT_THROW(CycInt::from_trace_histogram(3, wrong), std::invalid_argument);
}

TEST(CycInt, Reduction) {
  EXPECT_EQ(CycInt::zeta_power(3, 1) * CycInt::zeta_power(3, 1), make(3, {-1, -1}));
  EXPECT_EQ(CycInt::zeta_power(5, 7), CycInt::zeta_power(5, 2));
  EXPECT_EQ(CycInt::zeta_power(5, -1), CycInt::zeta_power(5, 4));
  // A length-p input is reduced through 1 + zeta + ... + zeta^(p-1) = 0.
  EXPECT_EQ(CycInt(5, std::vector<BigInt>{1, 1, 1, 1, 1}), CycInt(5));
  EXPECT_EQ(make(3, {7, 0}).as_integer(), std::optional<BigInt>(7));
  EXPECT_FALSE(make(3, {0, 1}).as_integer().has_value());
  EXPECT_EQ(CycInt(2, BigInt(-5)).coeffs().size(), 1u);
}

TEST(CycInt, Serialization) {
  const auto x = make(5, {3, -2, 0, 17});
  EXPECT_EQ(x.to_string(), "3,-2,0,17");
  EXPECT_EQ(CycInt::parse(5, x.to_string()), x);
  EXPECT_EQ(CycInt(2, BigInt(-8)).to_string(), "-8");
  EXPECT_THROW(CycInt::parse(5, "1,2"), std::invalid_argument);
}

TEST(CycInt, MismatchedPrimes) {
  EXPECT_THROW(CycInt(3) + CycInt(5), std::invalid_argument);
  EXPECT_THROW(CycInt(3) * CycInt(5), std::invalid_argument);
}

TEST(CycInt, RingLawsAgainstComplexEvaluation) {
  auto rng = oracle::make_rng(10);
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
    for (int i = 0; i < 200; ++i) {
      const auto x = random_cyc(rng, p, 1000), y = random_cyc(rng, p, 1000), z = random_cyc(rng, p, 1000);
      ASSERT_EQ((x * y) * z, x * (y * z));
      ASSERT_EQ(x * (y + z), x * y + x * z);
      ASSERT_EQ(x * y, y * x);
      ASSERT_EQ(x - x, CycInt(p));
      ASSERT_EQ(conj(conj(x)), x);
      ASSERT_EQ(conj(x * y), conj(x) * conj(y));
      ASSERT_EQ(conj(x + y), conj(x) + conj(y));
      ASSERT_TRUE(close((x * y).to_complex(), x.to_complex() * y.to_complex()));
      ASSERT_TRUE(close((x + y).to_complex(), x.to_complex() + y.to_complex()));
      ASSERT_TRUE(close(conj(x).to_complex(), std::conj(x.to_complex())));
      ASSERT_EQ(pow(x, 3), x * x * x);
    }
    const CycInt k(p, BigInt(42));
    EXPECT_EQ(conj(k), k);
  }
}

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation_p(CycInt(3, BigInt(3))), ValuationQ(3, 2));
  EXPECT_EQ(valuation_p(pi_of(3)), ValuationQ(3, 1));
  EXPECT_EQ(valuation_p(pi_of(3)).to_string(), "1/2");
  EXPECT_TRUE(valuation_p(CycInt(7)).is_infinite());
  EXPECT_EQ(valuation_p(CycInt(7)).to_string(), "inf");
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    EXPECT_EQ(valuation_p(CycInt(p, BigInt(p))).compare(1, 1), std::strong_ordering::equal);
    EXPECT_EQ(valuation_p(pi_of(p)).compare(1, p - 1), std::strong_ordering::equal);
    // (1 - zeta)^(p-1) / p is a unit
    EXPECT_EQ(valuation_p(pow(pi_of(p), p - 1)), valuation_p(CycInt(p, BigInt(p))));
  }
  EXPECT_LT(ValuationQ(5, 3), ValuationQ::infinity(5));
  EXPECT_EQ(ValuationQ(5, 3) + ValuationQ::infinity(5), ValuationQ::infinity(5));
}

TEST(Valuation, RationalIntegersAgreeWithOrdinary) {
  auto rng = oracle::make_rng(11);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 300; ++i) {
      BigInt n = static_cast<long long>(rng() % 100000) + 1;
      for (auto k = rng() % 6; k > 0; --k) n *= p;
      const auto v = valuation_p(CycInt(p, n));
      ASSERT_EQ(v.numerator(), int_valuation(n, p) * (p - 1));
    }
  }
}

TEST(Valuation, MatchesNormOracle) {
  auto rng = oracle::make_rng(12);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 150; ++i) {
      auto x = random_cyc(rng, p, 50);
      for (auto k = rng() % 5; k > 0; --k) x *= pi_of(p);
      if (x.is_zero()) continue;
      ASSERT_EQ(valuation_p(x).numerator(), oracle::valuation_numerator_by_norm(x)) << x.to_string();
    }
  }
}

TEST(Valuation, MultiplicativeProperty) {
  auto rng = oracle::make_rng(13);
  std::size_t checked = 0;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int i = 0; i < 1000; ++i) {
      auto x = random_cyc(rng, p, 30), y = random_cyc(rng, p, 30);
      for (auto k = rng() % 4; k > 0; --k) x *= pi_of(p);
      for (auto k = rng() % 4; k > 0; --k) y *= pi_of(p);
      if (x.is_zero() || y.is_zero()) continue;
      ASSERT_EQ(valuation_p(x * y), valuation_p(x) + valuation_p(y)) << x.to_string() << " | " << y.to_string();
      ++checked;
    }
  }
  EXPECT_GT(checked, 2900u);
}

TEST(Valuation, DivisionByPiAgreesWithQuotient) {
  auto rng = oracle::make_rng(14);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 300; ++i) {
      const auto x = random_cyc(rng, p, 40);
      const bool divisible_by_test = x.eval_at_one() % p == 0;
      const auto q = divide_by_pi(x);
      ASSERT_EQ(q.has_value(), divisible_by_test);
      if (q) {
        ASSERT_EQ(*q * pi_of(p), x);
      }
      // Any multiple of pi is divisible, and the quotient is recovered.
      const auto y = x * pi_of(p);
      ASSERT_EQ(divide_by_pi(y), std::optional<CycInt>(x));
    }
  }
}

TEST(PDecompose, Examples) {
  auto a = p_decompose(BigInt(-24), 2);
  EXPECT_EQ(a.odd_part, 3);
  EXPECT_EQ(a.p_part, 8);
  auto b = p_decompose(BigInt(9), 3);
  EXPECT_EQ(b.odd_part, 1);
  EXPECT_EQ(b.p_part, 9);
  auto c = p_decompose(BigInt(10), 3);
  EXPECT_EQ(c.odd_part, 10);
  EXPECT_EQ(c.p_part, 1);
  EXPECT_THROW(p_decompose(BigInt(0), 3), std::invalid_argument);
  EXPECT_TRUE(is_power_of(BigInt(81), 3));
  EXPECT_FALSE(is_power_of(BigInt(-8), 2));
  EXPECT_TRUE(is_power_of(BigInt(1), 2));
  EXPECT_FALSE(is_power_of(BigInt(12), 2));
}

TEST(CycInt, BigCoefficients) {
  // Sixth powers at q = 3^5 overflow 64 bits; exact arithmetic must not.
  const CycInt x(3, std::vector<BigInt>{BigInt(243) * 243 * 243, BigInt(-1)});
  const auto y = pow(x, 6);
  EXPECT_TRUE(close(y.to_complex() / std::pow(std::abs(x.to_complex()), 6),
                    std::pow(x.to_complex() / std::abs(x.to_complex()), 6)));
  EXPECT_EQ(valuation_p(CycInt(3, BigInt(243) * 243)).compare(10, 1), std::strong_ordering::equal);
}
