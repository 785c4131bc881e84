#include "oracle.hpp"
#include "weilsum/analysis.hpp"
#include "weilsum/weil_engine.hpp"

#include <gtest/gtest.h>

using namespace weilsum;

namespace {

std::vector<std::pair<std::uint32_t, unsigned>> fields_up_to(std::uint64_t qmax) {
  std::vector<std::pair<std::uint32_t, unsigned>> out;
  for (std::uint32_t p = 2; p <= qmax; ++p)
    if (is_prime(p))
      for (unsigned n = 1; checked_power(p, n, qmax); ++n) out.emplace_back(p, n);
  return out;
}

}  // namespace

TEST(WeilEngine, ExponentClasses) {
  EXPECT_EQ(canonical_exponent_classes(3, 9), (std::vector<std::uint64_t>{1, 5}));
  EXPECT_EQ(canonical_exponent_classes(2, 8), (std::vector<std::uint64_t>{1, 3}));
  EXPECT_EQ(canonical_exponent_classes(2, 2), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(canonical_exponent_classes(3, 3), (std::vector<std::uint64_t>{1}));
  // Over a prime field x -> p x is the identity mod p - 1, so orbits are singletons.
  EXPECT_EQ(canonical_exponent_classes(7, 7), (std::vector<std::uint64_t>{1, 5}));
  EXPECT_EQ(exponent_orbit(2, 8, 3), (std::vector<std::uint64_t>{3, 5, 6}));
  // Classes partition the valid exponents.
  for (auto [p, n] : fields_up_to(3000)) {
    const std::uint64_t q = *checked_power(p, n, 3000);
    std::vector<int> hits(q, 0);
    for (auto d : canonical_exponent_classes(p, q))
      for (auto e : exponent_orbit(p, q, d)) ++hits[e];
    for (std::uint64_t d = 1; d < q; ++d) ASSERT_EQ(hits[d], std::gcd(d, q - 1) == 1 ? 1 : 0) << q << " " << d;
  }
}

TEST(WeilEngine, NaiveFrozenExamples) {
  auto f9 = build_field(3, 2);
  const oracle::SlowField F9{3, 2, f9->spec().modulus};
  // u = 0: x -> x^d permutes F, so the sum vanishes.
  EXPECT_TRUE(weil_sum_naive(*f9, 5, f9->zero()).is_zero());
  EXPECT_EQ(weil_sum_naive(*f9, 5, f9->generator()),
            CycInt::from_trace_histogram(3, oracle::weil_histogram(F9, 5, f9->generator().code)));
  // Degenerate d at u = -1 gives q.
  EXPECT_EQ(weil_sum_naive(*f9, 3, f9->neg(f9->one())), CycInt(3, BigInt(9)));
  EXPECT_THROW(weil_sum_naive(*f9, 2, f9->one()), std::invalid_argument);
}

TEST(WeilEngine, F32Exponent13) {
  auto f = build_field(2, 5);
  for (auto method : {Method::naive, Method::fast}) {
    const auto s = weil_spectrum(f, 13, method);
    ASSERT_EQ(s.value_count(), 3u);
    EXPECT_TRUE(s.three_valued());
    EXPECT_FALSE(s.degenerate);
    EXPECT_EQ(s.find(CycInt(2, BigInt(0)))->multiplicity, 15u);
    EXPECT_EQ(s.find(CycInt(2, BigInt(8)))->multiplicity, 10u);
    EXPECT_EQ(s.find(CycInt(2, BigInt(-8)))->multiplicity, 6u);
  }
}

TEST(WeilEngine, NaiveMatchesSlowOracle) {
  for (auto [p, n] : fields_up_to(64)) {
    auto f = build_field(p, n);
    const oracle::SlowField F{p, n, f->spec().modulus};
    for (auto d : canonical_exponent_classes(p, f->order())) {
      const auto values = weil_values(f, static_cast<std::int64_t>(d), Method::naive);
      for (std::uint32_t i = 0; i < f->group_order(); ++i) {
        const auto h = oracle::weil_histogram(F, d, f->exp(i).code);
        ASSERT_EQ(values[i], CycInt::from_trace_histogram(p, h));
        ASSERT_LT(std::abs(values[i].to_complex() - oracle::weil_complex(F, d, f->exp(i).code)), 1e-9);
      }
    }
  }
}

TEST(WeilEngine, FastEqualsNaiveUpTo81) {
  for (auto [p, n] : fields_up_to(81)) {
    auto f = build_field(p, n);
    for (auto d : canonical_exponent_classes(p, f->order())) {
      const auto a = weil_values(f, static_cast<std::int64_t>(d), Method::naive);
      const auto b = weil_values(f, static_cast<std::int64_t>(d), Method::fast);
      ASSERT_EQ(a, b) << p << "^" << n << " d=" << d;
    }
  }
}

TEST(WeilEngine, SpectrumInvariants) {
  for (auto [p, n] : fields_up_to(81)) {
    auto f = build_field(p, n);
    const BigInt q = f->order();
    for (auto d : canonical_exponent_classes(p, f->order())) {
      const auto s = weil_spectrum(f, static_cast<std::int64_t>(d));
      EXPECT_EQ(s.total_multiplicity(), f->group_order());
      for (std::size_t i = 0; i + 1 < s.entries.size(); ++i)
        EXPECT_LT(s.entries[i].value.to_string(), s.entries[i + 1].value.to_string());
      EXPECT_EQ(s.degenerate, is_degenerate(p, n, d));
      if (s.degenerate) {
        EXPECT_EQ(s.value_count(), f->order() == 2 ? 1u : 2u);
        EXPECT_EQ(s.find(CycInt(p, q))->multiplicity, 1u);
      } else {
        EXPECT_GE(s.value_count(), 3u);
      }
      // Frobenius invariance
      const std::uint64_t pd = d * p % f->group_order();
      EXPECT_EQ(weil_spectrum(f, static_cast<std::int64_t>(pd == 0 ? f->group_order() : pd)).entries, s.entries);
      // Gloria: every value has positive valuation
      for (const auto& e : s.entries) EXPECT_EQ(valuation_p(e.value).compare(0, 1), std::strong_ordering::greater);
    }
  }
}

TEST(WeilEngine, MethodResolution) {
  EXPECT_EQ(resolve_method(Method::automatic, 512), Method::naive);
  EXPECT_EQ(resolve_method(Method::automatic, 729), Method::fast);
  EXPECT_EQ(resolve_method(Method::naive, 1 << 20), Method::naive);
}

TEST(WeilEngine, AuditAt1024) {
  auto f = build_field(2, 10);
  auto rng = oracle::make_rng(30);
  const auto classes = canonical_exponent_classes(2, 1024);
  for (int k = 0; k < 3; ++k) {
    const auto d = classes[rng() % classes.size()];
    const auto values = weil_values(f, static_cast<std::int64_t>(d), Method::fast);
    for (int j = 0; j < 40; ++j) {
      const auto i = static_cast<std::uint32_t>(rng() % f->group_order());
      ASSERT_EQ(values[i], weil_sum_naive(*f, static_cast<std::int64_t>(d), f->exp(i))) << "d=" << d << " i=" << i;
    }
  }
}
