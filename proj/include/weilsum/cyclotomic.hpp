#pragma once

// Exact arithmetic in Z[zeta_p] and the p-adic valuation extended to Q(zeta_p).
//
// A CycInt is stored in the power basis 1, zeta, ..., zeta^(p-2); the relation
// 1 + zeta + ... + zeta^(p-1) = 0 is applied eagerly, so equality is a plain
// coefficient compare. For p = 2 this is a single integer.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace weilsum {

using BigInt = boost::multiprecision::cpp_int;

class CycInt {
 public:
  CycInt() : CycInt(2) {}
  explicit CycInt(std::uint32_t p) : p_(p), c_(p < 2 ? 1 : p - 1) {
    if (p < 2) throw std::invalid_argument("CycInt: p must be a prime >= 2");
  }
  CycInt(std::uint32_t p, const BigInt& k) : CycInt(p) { c_[0] = k; }
  /// Accepts p - 1 coefficients (already reduced) or p coefficients
  /// (a combination of all p-th roots of unity, reduced here).
  CycInt(std::uint32_t p, std::vector<BigInt> coeffs) : CycInt(p) {
    if (coeffs.size() == p) {
      reduce_into(coeffs);
    } else if (coeffs.size() == p - 1) {
      c_ = std::move(coeffs);
    } else {
      throw std::invalid_argument("CycInt: expected p - 1 or p coefficients");
    }
  }

  /// zeta^k for any integer k.
  static CycInt zeta_power(std::uint32_t p, std::int64_t k) {
    std::vector<BigInt> full(p);
    auto r = k % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    full[static_cast<std::size_t>(r)] = 1;
    return CycInt(p, std::move(full));
  }

  /// sum_j counts[j] zeta^j; used to turn a trace-fiber count into a character sum.
  template <typename Count>
  static CycInt from_trace_histogram(std::uint32_t p, std::span<const Count> counts) {
    if (counts.size() != p)
      throw std::invalid_argument("from_trace_histogram: expected " + std::to_string(p) + " counts");
    CycInt r(p);
    const BigInt last(counts[p - 1]);
    for (std::uint32_t j = 0; j + 1 < p; ++j) r.c_[j] = BigInt(counts[j]) - last;
    return r;
  }
  static CycInt from_trace_histogram(std::uint32_t p, const std::vector<std::uint64_t>& counts) {
    return from_trace_histogram<std::uint64_t>(p, std::span<const std::uint64_t>(counts));
  }

  std::uint32_t prime() const { return p_; }
  const std::vector<BigInt>& coeffs() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const BigInt& x) { return x.is_zero(); });
  }

  /// The rational integer this value equals, if any.
  std::optional<BigInt> as_integer() const {
    for (std::size_t j = 1; j < c_.size(); ++j)
      if (!c_[j].is_zero()) return std::nullopt;
    return c_[0];
  }

  /// Image under zeta -> 1, i.e. the sum of the basis coefficients.
  BigInt eval_at_one() const {
    BigInt s = 0;
    for (const auto& x : c_) s += x;
    return s;
  }

  std::complex<double> to_complex() const {
    std::complex<double> z = 0;
    for (std::size_t j = 0; j < c_.size(); ++j)
      z += static_cast<double>(c_[j]) * std::polar(1.0, 2.0 * std::numbers::pi * j / p_);
    return z;
  }

  /// "c0,c1,...,c_{p-2}"
  std::string to_string() const {
    std::string s;
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (j) s += ',';
      s += c_[j].str();
    }
    return s;
  }

  static CycInt parse(std::uint32_t p, const std::string& text) {
    std::vector<BigInt> coeffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.emplace_back(item);
    if (coeffs.size() != p - 1)
      throw std::invalid_argument("CycInt::parse: wrong number of coefficients in '" + text + "'");
    return CycInt(p, std::move(coeffs));
  }

  CycInt& operator+=(const CycInt& o) {
    same_prime(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  CycInt& operator-=(const CycInt& o) {
    same_prime(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  CycInt& operator*=(const BigInt& k) {
    for (auto& x : c_) x *= k;
    return *this;
  }
  CycInt& operator*=(const CycInt& o) { return *this = *this * o; }

  friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
  friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
  friend CycInt operator-(CycInt a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend CycInt operator*(CycInt a, const BigInt& k) { return a *= k; }
  friend CycInt operator*(const BigInt& k, CycInt a) { return a *= k; }

  friend CycInt operator*(const CycInt& a, const CycInt& b) {
    a.same_prime(b);
    const std::uint32_t p = a.p_;
    if (p == 2) return CycInt(2, a.c_[0] * b.c_[0]);
    std::vector<BigInt> full(p);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) full[(i + j) % p] += a.c_[i] * b.c_[j];
    }
    CycInt r(p);
    r.reduce_into(full);
    return r;
  }

  friend bool operator==(const CycInt& a, const CycInt& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  friend bool operator<(const CycInt& a, const CycInt& b) {
    if (a.p_ != b.p_) return a.p_ < b.p_;
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

 private:
  void same_prime(const CycInt& o) const {
    if (o.p_ != p_) throw std::invalid_argument("CycInt: mismatched primes");
  }
  // full has p entries (coefficients of zeta^0..zeta^(p-1)); eliminate zeta^(p-1).
  void reduce_into(std::vector<BigInt>& full) {
    if (p_ == 2) {
      c_[0] = full[0] - full[1];
      return;
    }
    const BigInt top = full[p_ - 1];
    for (std::uint32_t j = 0; j + 1 < p_; ++j) c_[j] = full[j] - top;
  }

  std::uint32_t p_;
  std::vector<BigInt> c_;
};

/// Complex conjugation zeta -> zeta^(-1); an involutive ring automorphism.
inline CycInt conj(const CycInt& x) {
  const std::uint32_t p = x.prime();
  if (p == 2) return x;
  std::vector<BigInt> full(p);
  const auto& c = x.coeffs();
  for (std::uint32_t j = 0; j < c.size(); ++j) full[(p - j) % p] = c[j];
  return CycInt(p, std::move(full));
}

inline CycInt pow(const CycInt& x, unsigned k) {
  CycInt r(x.prime(), BigInt(1));
  for (unsigned i = 0; i < k; ++i) r *= x;
  return r;
}

/// p-adic valuation normalized so that v_p(p) = 1. Values are k / (p - 1).
class ValuationQ {
 public:
  ValuationQ(std::uint32_t p, std::optional<std::uint64_t> numerator) : p_(p), k_(numerator) {}
  static ValuationQ infinity(std::uint32_t p) { return {p, std::nullopt}; }

  bool is_infinite() const { return !k_.has_value(); }
  std::uint64_t numerator() const {
    if (!k_) throw std::domain_error("ValuationQ: infinite valuation has no numerator");
    return *k_;
  }
  std::uint64_t denominator() const { return p_ - 1; }
  std::uint32_t prime() const { return p_; }

  /// Three-way comparison against num / den (den > 0).
  std::strong_ordering compare(std::uint64_t num, std::uint64_t den) const {
    if (!k_) return std::strong_ordering::greater;
    return (*k_ * den) <=> (num * denominator());
  }
  double to_double() const {
    return k_ ? static_cast<double>(*k_) / static_cast<double>(denominator()) : INFINITY;
  }
  std::string to_string() const {
    if (!k_) return "inf";
    return std::to_string(*k_) + "/" + std::to_string(denominator());
  }

  friend ValuationQ operator+(const ValuationQ& a, const ValuationQ& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("ValuationQ: mismatched primes");
    if (!a.k_ || !b.k_) return infinity(a.p_);
    return {a.p_, *a.k_ + *b.k_};
  }
  friend bool operator==(const ValuationQ& a, const ValuationQ& b) = default;
  friend std::strong_ordering operator<=>(const ValuationQ& a, const ValuationQ& b) {
    if (!a.k_ && !b.k_) return std::strong_ordering::equal;
    if (!a.k_) return std::strong_ordering::greater;
    if (!b.k_) return std::strong_ordering::less;
    return *a.k_ <=> *b.k_;
  }

 private:
  std::uint32_t p_;
  std::optional<std::uint64_t> k_;
};

/// x / (1 - zeta) when it lies in Z[zeta], nullopt otherwise.
///
/// x is divisible by pi = 1 - zeta iff x(1) == 0 (mod p). Then
/// h = x + c * Phi_p with c = -x(1)/p vanishes at 1, and h / (1 - z) is found by
/// synthetic division; h == x in Z[zeta] so the quotient is exact.
inline std::optional<CycInt> divide_by_pi(const CycInt& x) {
  const std::uint32_t p = x.prime();
  const BigInt at_one = x.eval_at_one();
  if (at_one % p != 0) return std::nullopt;
  const BigInt c = -at_one / p;
  std::vector<BigInt> h(p);
  for (std::uint32_t j = 0; j < p; ++j) h[j] = c;
  const auto& xc = x.coeffs();
  for (std::size_t j = 0; j < xc.size(); ++j) h[j] += xc[j];
  // h(z) = (1 - z) y(z) with deg y = p - 2: y_0 = h_0, y_j = y_{j-1} + h_j.
  std::vector<BigInt> y(p - 1);
  BigInt run = 0;
  for (std::uint32_t j = 0; j + 1 < p; ++j) {
    run += h[j];
    y[j] = run;
  }
  if (run + h[p - 1] != 0) throw std::logic_error("divide_by_pi: nonzero remainder");
  return CycInt(p, p == 2 ? std::vector<BigInt>{y[0]} : std::move(y));
}

/// Extended p-adic valuation of x in Q(zeta_p): k / (p - 1) where (1 - zeta)^k
/// exactly divides x; infinity for x == 0.
inline ValuationQ valuation_p(const CycInt& x) {
  const std::uint32_t p = x.prime();
  if (x.is_zero()) return ValuationQ::infinity(p);
  // Rational integers: v_p(p) = 1 and (p) = (pi)^(p-1), so strip factors of p fast.
  CycInt cur = x;
  std::uint64_t k = 0;
  while (true) {
    bool all_div = true;
    for (const auto& c : cur.coeffs())
      if (c % p != 0) {
        all_div = false;
        break;
      }
    if (!all_div) break;
    std::vector<BigInt> reduced(cur.coeffs());
    for (auto& c : reduced) c /= p;
    cur = CycInt(p, std::move(reduced));
    k += p - 1;
  }
  while (auto q = divide_by_pi(cur)) {
    cur = std::move(*q);
    ++k;
  }
  return {p, k};
}

/// Ordinary v_p of a nonzero integer.
inline std::uint64_t int_valuation(BigInt x, std::uint32_t p) {
  if (x.is_zero()) throw std::domain_error("int_valuation: zero");
  std::uint64_t k = 0;
  while (x % p == 0) {
    x /= p;
    ++k;
  }
  return k;
}

/// |x| = odd_part * p_part with p_part = p^exponent and gcd(odd_part, p) = 1.
struct PDecomp {
  BigInt odd_part;
  BigInt p_part;
  std::uint64_t exponent = 0;
};

inline PDecomp p_decompose(const BigInt& x, std::uint32_t p) {
  if (x.is_zero()) throw std::invalid_argument("p_decompose: zero has no decomposition");
  PDecomp d{abs(x), 1, 0};
  while (d.odd_part % p == 0) {
    d.odd_part /= p;
    d.p_part *= p;
    ++d.exponent;
  }
  return d;
}

inline bool is_power_of(const BigInt& x, std::uint32_t p) {
  if (x <= 0) return false;
  return p_decompose(x, p).odd_part == 1;
}

}  // namespace weilsum
