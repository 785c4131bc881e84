#pragma once

// Small finite fields F_{p^n} backed by dense exp/log/Zech/trace tables.
//
// Elements are stored by their "code": the coefficient vector (c_0, ..., c_{n-1})
// of the polynomial basis packed as the base-p integer c_0 + c_1 p + ... .
// The field is built from a canonical modulus (lexicographically smallest
// monic irreducible, compared c_0 first) and a canonical generator (smallest
// primitive element in the same order), so tables are reproducible bit for bit.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace weilsum {

/// Largest field order accepted by build_field.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 22;

inline bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t f = 2; f * f <= x; ++f)
    if (x % f == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= x; ++f) {
    if (x % f == 0) {
      out.push_back(f);
      while (x % f == 0) x /= f;
    }
  }
  if (x > 1) out.push_back(x);
  return out;
}

/// p^n, or nullopt once it exceeds `cap`.
inline std::optional<std::uint64_t> checked_power(std::uint64_t p, unsigned n,
                                                  std::uint64_t cap) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (q > cap / p) return std::nullopt;
    q *= p;
  }
  return q;
}

/// Reduces an arbitrary exponent into [0, m) (m > 0).
inline std::uint64_t mod_exponent(std::int64_t e, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  auto r = e % mm;
  if (r < 0) r += mm;
  return static_cast<std::uint64_t>(r);
}

/// d' in [1, m] with d * d' == 1 (mod m). For m == 1 returns 1.
inline std::uint64_t inverse_exponent(std::int64_t d, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("inverse_exponent: modulus must be positive");
  if (m == 1) return 1;
  std::int64_t a = static_cast<std::int64_t>(mod_exponent(d, m));
  std::int64_t b = static_cast<std::int64_t>(m);
  std::int64_t x0 = 1, x1 = 0;
  while (b != 0) {
    const std::int64_t t = a / b;
    std::tie(a, b) = std::make_pair(b, a - t * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - t * x1);
  }
  if (a != 1)
    throw std::invalid_argument("inverse_exponent: gcd(" + std::to_string(d) + ", " +
                                std::to_string(m) + ") != 1");
  const auto r = mod_exponent(x0, m);
  return r == 0 ? m : r;
}

namespace detail {

// Polynomials over Z_p, lowest degree first, no trailing zeros (zero = empty).
using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = [&] {
    std::uint64_t inv = 1, base = f.back() % p, e = p - 2;
    while (e) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return inv;
  }();
  while (a.size() >= f.size()) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i)
      a[shift + i] = (a[shift + i] + (p - c) * f[i]) % p;
    trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), f, p);
}

inline Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Rabin's test: f (monic, degree n) is irreducible over F_p iff
/// x^(p^n) == x mod f and gcd(x^(p^(n/r)) - x, f) == 1 for each prime r | n.
inline bool is_irreducible(const Poly& f, std::uint64_t p) {
  const auto n = static_cast<unsigned>(f.size() - 1);
  if (n == 1) return true;
  const Poly x{0, 1};
  auto frobenius_iterate = [&](unsigned k) {
    Poly r = x;
    for (unsigned i = 0; i < k; ++i) r = poly_powmod(r, p, f, p);
    return r;
  };
  if (poly_sub(frobenius_iterate(n), x, p) != Poly{}) return false;
  for (auto r : prime_factors(n)) {
    const Poly g = poly_gcd(f, poly_sub(frobenius_iterate(n / static_cast<unsigned>(r)), x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

/// Coefficients (c_0, ..., c_{n-1}) of the k-th vector in low-degree-first
/// lexicographic order (c_0 is the most significant position).
inline std::vector<std::uint64_t> lex_vector(std::uint64_t k, std::uint64_t p, unsigned n) {
  std::vector<std::uint64_t> c(n, 0);
  for (unsigned i = 0; i < n; ++i) {
    c[n - 1 - i] = k % p;
    k /= p;
  }
  return c;
}

}  // namespace detail

/// Lexicographically smallest monic irreducible of degree n over F_p,
/// coefficients listed c_0 .. c_n (c_n == 1).
inline std::vector<std::uint32_t> canonical_modulus(std::uint32_t p, unsigned n) {
  const auto count = checked_power(p, n, kMaxFieldOrder);
  if (!count) throw std::invalid_argument("canonical_modulus: p^n exceeds bound");
  for (std::uint64_t k = 0; k < *count; ++k) {
    detail::Poly f = detail::lex_vector(k, p, n);
    f.push_back(1);
    if (n > 1 && f[0] == 0) continue;  // divisible by x
    if (detail::is_irreducible(f, p)) return {f.begin(), f.end()};
  }
  throw std::logic_error("canonical_modulus: no irreducible polynomial found");
}

struct FieldSpec {
  std::uint32_t p = 2;
  unsigned n = 1;
  std::vector<std::uint32_t> modulus;  // n + 1 coefficients, lowest degree first

  std::uint64_t order() const {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < n; ++i) q *= p;
    return q;
  }
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// An element of a FieldTables, identified by its packed coefficient code.
struct FieldElement {
  std::uint32_t code = 0;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

class FieldTables {
 public:
  static constexpr std::uint32_t kNoLog = 0xffffffffu;

  FieldTables(std::uint32_t p, unsigned n) {
    if (!is_prime(p)) throw std::invalid_argument("build_field: p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw std::invalid_argument("build_field: n must be positive");
    const auto q = checked_power(p, n, kMaxFieldOrder);
    if (!q)
      throw std::invalid_argument("build_field: p^n exceeds bound " + std::to_string(kMaxFieldOrder));
    spec_ = FieldSpec{p, n, canonical_modulus(p, n)};
    q_ = static_cast<std::uint32_t>(*q);
    m_ = q_ - 1;
    pow_p_.resize(n + 1, 1);
    for (unsigned i = 1; i <= n; ++i) pow_p_[i] = pow_p_[i - 1] * p;
    find_generator();
    build_exp_log();
    build_trace();
    build_zech();
  }

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t p() const { return spec_.p; }
  unsigned n() const { return spec_.n; }
  std::uint32_t order() const { return q_; }
  /// |F*| = q - 1.
  std::uint32_t group_order() const { return m_; }
  FieldElement generator() const { return generator_; }

  std::span<const std::uint32_t> exp_table() const { return exp_; }
  std::span<const std::uint32_t> log_table() const { return log_; }
  std::span<const std::uint32_t> trace_table() const { return trace_; }

  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }

  /// g^i for any integer i.
  FieldElement exp(std::int64_t i) const { return {exp_[mod_exponent(i, m_)]}; }
  std::uint32_t log(FieldElement x) const {
    check(x);
    if (x.code == 0) throw std::domain_error("log of zero");
    return log_[x.code];
  }

  /// Index form: 0 is zero, i in [1, q-1] is g^(i-1).
  FieldElement from_index(std::uint32_t i) const {
    if (i >= q_) throw std::out_of_range("from_index: index out of range");
    return i == 0 ? zero() : exp(i - 1);
  }
  std::uint32_t index_of(FieldElement x) const {
    check(x);
    return x.code == 0 ? 0 : log_[x.code] + 1;
  }

  std::vector<std::uint32_t> coeffs(FieldElement x) const {
    check(x);
    std::vector<std::uint32_t> c(spec_.n);
    for (unsigned i = 0; i < spec_.n; ++i) {
      c[i] = x.code % spec_.p;
      x.code /= spec_.p;
    }
    return c;
  }
  FieldElement from_coeffs(std::span<const std::uint32_t> c) const {
    if (c.size() != spec_.n) throw std::invalid_argument("from_coeffs: wrong length");
    std::uint32_t code = 0;
    for (unsigned i = spec_.n; i-- > 0;) {
      if (c[i] >= spec_.p) throw std::invalid_argument("from_coeffs: coefficient out of range");
      code = code * spec_.p + c[i];
    }
    return {code};
  }
  /// The image of the integer k under Z -> F_p -> F.
  FieldElement from_integer(std::int64_t k) const {
    return {static_cast<std::uint32_t>(mod_exponent(k, spec_.p))};
  }

  bool valid(FieldElement x) const { return x.code < q_; }

  FieldElement add(FieldElement a, FieldElement b) const {
    if (a.code == 0) return b;
    if (b.code == 0) return a;
    const std::uint32_t la = log_[a.code];
    const std::uint32_t k = sub_mod(log_[b.code], la);
    const std::uint32_t z = zech_[k];
    if (z == kNoLog) return zero();
    return {exp_[add_mod(la, z)]};
  }
  /// Digit-wise addition; independent of the log tables.
  FieldElement add_digits(FieldElement a, FieldElement b) const {
    if (spec_.p == 2) return {a.code ^ b.code};
    std::uint32_t r = 0;
    for (unsigned i = 0; i < spec_.n; ++i) {
      const std::uint32_t da = a.code % spec_.p, db = b.code % spec_.p;
      r += ((da + db) % spec_.p) * pow_p_[i];
      a.code /= spec_.p;
      b.code /= spec_.p;
    }
    return {r};
  }
  FieldElement neg(FieldElement a) const {
    if (a.code == 0 || spec_.p == 2) return a;
    return {exp_[add_mod(log_[a.code], m_ / 2)]};
  }
  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }
  FieldElement mul(FieldElement a, FieldElement b) const {
    if (a.code == 0 || b.code == 0) return zero();
    return {exp_[add_mod(log_[a.code], log_[b.code])]};
  }
  FieldElement inv(FieldElement a) const {
    if (a.code == 0) throw std::domain_error("inverse of zero");
    return {exp_[sub_mod(0, log_[a.code])]};
  }
  /// x^d via log arithmetic. Negative d is allowed for nonzero x; 0^0 is rejected.
  FieldElement pow(FieldElement x, std::int64_t d) const {
    check(x);
    if (x.code == 0) {
      if (d <= 0) throw std::domain_error("pow: 0^d undefined for d <= 0");
      return zero();
    }
    const auto e = mod_exponent(d, m_);
    const auto l = static_cast<std::uint64_t>(log_[x.code]);
    return {exp_[(l * e) % m_]};
  }
  /// Absolute trace Tr_{F/F_p}(x) in [0, p).
  std::uint32_t trace(FieldElement x) const {
    check(x);
    return trace_[x.code];
  }

 private:
  void check(FieldElement x) const {
    if (x.code >= q_) throw std::out_of_range("field element out of range");
  }
  std::uint32_t add_mod(std::uint32_t a, std::uint32_t b) const {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<std::uint32_t>(s >= m_ ? s - m_ : s);
  }
  std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : static_cast<std::uint32_t>(std::uint64_t{a} + m_ - b);
  }

  detail::Poly modulus_poly() const { return {spec_.modulus.begin(), spec_.modulus.end()}; }

  void find_generator() {
    const detail::Poly f = modulus_poly();
    const auto factors = prime_factors(m_);
    for (std::uint64_t k = 1; k < q_; ++k) {
      detail::Poly c = detail::lex_vector(k, spec_.p, spec_.n);
      detail::trim(c);
      if (c.empty()) continue;
      bool primitive = true;
      for (auto r : factors) {
        if (detail::poly_powmod(c, m_ / r, f, spec_.p) == detail::Poly{1}) {
          primitive = false;
          break;
        }
      }
      if (!primitive) continue;
      std::uint32_t code = 0;
      for (std::size_t i = c.size(); i-- > 0;) code = code * spec_.p + static_cast<std::uint32_t>(c[i]);
      generator_ = {code};
      return;
    }
    // F_2: the only nonzero element is 1, of order 1 == q - 1.
    generator_ = one();
  }

  // Multiplication by the generator is a linear map over F_p; precompute the
  // images of the basis x^i and apply it q - 1 times.
  void build_exp_log() {
    const std::uint32_t p = spec_.p;
    const unsigned n = spec_.n;
    const detail::Poly f = modulus_poly();
    detail::Poly g;
    for (auto c : coeffs(generator_)) g.push_back(c);
    detail::trim(g);
    std::vector<std::vector<std::uint32_t>> images(n, std::vector<std::uint32_t>(n, 0));
    std::vector<std::uint32_t> image_codes(n, 0);
    for (unsigned i = 0; i < n; ++i) {
      detail::Poly xi(i + 1, 0);
      xi[i] = 1;
      const detail::Poly prod = detail::poly_mulmod(xi, g, f, p);
      for (std::size_t j = 0; j < prod.size(); ++j) {
        images[i][j] = static_cast<std::uint32_t>(prod[j]);
        image_codes[i] += static_cast<std::uint32_t>(prod[j]) * pow_p_[j];
      }
    }
    exp_.assign(m_, 0);
    log_.assign(q_, kNoLog);
    std::uint32_t cur = 1;
    std::vector<std::uint32_t> acc(n);
    for (std::uint32_t i = 0; i < m_; ++i) {
      if (log_[cur] != kNoLog) throw std::logic_error("build_field: generator is not primitive");
      exp_[i] = cur;
      log_[cur] = i;
      if (p == 2) {
        std::uint32_t next = 0;
        for (unsigned j = 0; j < n; ++j)
          if ((cur >> j) & 1u) next ^= image_codes[j];
        cur = next;
      } else {
        std::fill(acc.begin(), acc.end(), 0);
        std::uint32_t c = cur;
        for (unsigned j = 0; j < n; ++j) {
          const std::uint32_t digit = c % p;
          c /= p;
          if (digit == 0) continue;
          for (unsigned k = 0; k < n; ++k) acc[k] = (acc[k] + digit * images[j][k]) % p;
        }
        cur = 0;
        for (unsigned k = n; k-- > 0;) cur = cur * p + acc[k];
      }
    }
    if (cur != 1) throw std::logic_error("build_field: generator order mismatch");
  }

  // Trace is F_p-linear: Tr(sum c_i x^i) = sum c_i Tr(x^i), with Tr(x^i)
  // computed as the Frobenius orbit sum in F_p[x]/(f).
  void build_trace() {
    const std::uint32_t p = spec_.p;
    const unsigned n = spec_.n;
    const detail::Poly f = modulus_poly();
    std::vector<std::uint32_t> basis_trace(n, 0);
    for (unsigned i = 0; i < n; ++i) {
      detail::Poly xi(i + 1, 0);
      xi[i] = 1;
      detail::Poly sum, term = detail::poly_mod(xi, f, p);
      for (unsigned k = 0; k < n; ++k) {
        if (sum.size() < term.size()) sum.resize(term.size(), 0);
        for (std::size_t j = 0; j < term.size(); ++j) sum[j] = (sum[j] + term[j]) % p;
        term = detail::poly_powmod(term, p, f, p);
      }
      detail::trim(sum);
      if (sum.size() > 1) throw std::logic_error("build_field: trace not in prime field");
      basis_trace[i] = sum.empty() ? 0 : static_cast<std::uint32_t>(sum[0]);
    }
    trace_.assign(q_, 0);
    for (std::uint32_t code = 0; code < q_; ++code) {
      std::uint32_t c = code, t = 0;
      for (unsigned i = 0; i < n; ++i) {
        t = (t + (c % p) * basis_trace[i]) % p;
        c /= p;
      }
      trace_[code] = t;
    }
  }
  void build_zech() {
    zech_.assign(m_, kNoLog);
    for (std::uint32_t k = 0; k < m_; ++k) {
      const FieldElement s = add_digits(one(), {exp_[k]});
      zech_[k] = s.code == 0 ? kNoLog : log_[s.code];
    }
  }

  FieldSpec spec_;
  std::uint32_t q_ = 0;
  std::uint32_t m_ = 0;
  std::vector<std::uint32_t> pow_p_;
  FieldElement generator_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> trace_;
  std::vector<std::uint32_t> zech_;  // zech_[k] = log(1 + g^k)
};

using FieldPtr = std::shared_ptr<const FieldTables>;

inline FieldPtr build_field(std::uint32_t p, unsigned n) {
  return std::make_shared<const FieldTables>(p, n);
}

}  // namespace weilsum
