#pragma once

// Weil sums W_{F,d}(u) = sum_x psi(x^d + u x) and their value spectra.

#include "weilsum/cyclotomic.hpp"
#include "weilsum/finite_field.hpp"
#include "weilsum/group_algebra.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace weilsum {

enum class Method { naive, fast, automatic };

/// Fields up to this order use the O(q^2) naive spectrum under Method::automatic.
inline constexpr std::uint64_t kNaiveCutoff = 512;

inline std::string to_string(Method m) {
  switch (m) {
    case Method::naive: return "naive";
    case Method::fast: return "fast";
    case Method::automatic: return "auto";
  }
  return "?";
}

inline Method resolve_method(Method m, std::uint64_t q) {
  if (m != Method::automatic) return m;
  return q <= kNaiveCutoff ? Method::naive : Method::fast;
}

inline void require_valid_exponent(const FieldTables& f, std::int64_t d) {
  if (d <= 0) throw std::invalid_argument("exponent d must be positive");
  if (std::gcd(static_cast<std::uint64_t>(d), std::uint64_t{f.group_order()}) != 1)
    throw std::invalid_argument("gcd(" + std::to_string(d) + ", " + std::to_string(f.group_order()) +
                                ") != 1");
}

/// d is degenerate over F_{p^n} when d == p^k (mod p^n - 1) for some k.
inline bool is_degenerate(std::uint32_t p, unsigned n, std::uint64_t d) {
  const auto q = checked_power(p, n, std::numeric_limits<std::uint64_t>::max() / 2);
  if (!q) throw std::invalid_argument("is_degenerate: field too large");
  const std::uint64_t m = *q - 1;
  if (m == 1) return true;
  std::uint64_t pk = 1;
  for (unsigned k = 0; k < n; ++k) {
    if (d % m == pk % m) return true;
    pk = pk * p % m;
  }
  return false;
}
inline bool is_degenerate(const FieldTables& f, std::uint64_t d) { return is_degenerate(f.p(), f.n(), d); }

/// Exact W_{F,d}(u) by direct summation over all x in F (including x = 0).
inline CycInt weil_sum_naive(const FieldTables& f, std::int64_t d, FieldElement u) {
  require_valid_exponent(f, d);
  const std::uint32_t p = f.p();
  std::vector<std::uint64_t> counts(p, 0);
  counts[0] += 1;  // x = 0
  for (std::uint32_t i = 0; i < f.group_order(); ++i) {
    const FieldElement x = f.exp(i);
    const std::uint32_t t = (f.trace(f.pow(x, d)) + f.trace(f.mul(u, x))) % p;
    ++counts[t];
  }
  return CycInt::from_trace_histogram(p, counts);
}

/// values[i] = W_{F,d}(g^i) for i in [0, q - 2].
inline std::vector<CycInt> weil_values(const FieldPtr& field, std::int64_t d, Method method) {
  const FieldTables& f = *field;
  require_valid_exponent(f, d);
  const std::uint32_t p = f.p();
  const std::uint32_t m = f.group_order();
  if (resolve_method(method, f.order()) == Method::fast) return weil_element(field, d).coeffs();

  // tr_g[i] = Tr(g^i), tr_d[i] = Tr(g^(i d)); W(g^j) sums zeta^(tr_d[i] + tr_g[i + j]).
  std::vector<std::uint32_t> tr_g(m), tr_d(m);
  const std::uint64_t dd = static_cast<std::uint64_t>(d) % m;
  for (std::uint32_t i = 0; i < m; ++i) {
    tr_g[i] = f.trace(f.exp(i));
    tr_d[i] = f.trace(f.exp(static_cast<std::int64_t>(std::uint64_t{i} * dd % m)));
  }
  std::vector<CycInt> values;
  values.reserve(m);
  std::vector<std::uint64_t> counts(p);
  for (std::uint32_t j = 0; j < m; ++j) {
    std::fill(counts.begin(), counts.end(), 0);
    counts[0] = 1;
    std::uint32_t k = j;
    for (std::uint32_t i = 0; i < m; ++i) {
      ++counts[(tr_d[i] + tr_g[k]) % p];
      if (++k == m) k = 0;
    }
    values.push_back(CycInt::from_trace_histogram(p, counts));
  }
  return values;
}

struct SpectrumEntry {
  CycInt value;
  std::uint64_t multiplicity = 0;
  friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// The multiset {W_{F,d}(u) : u in F*}.
struct WeilSpectrum {
  FieldSpec field;
  std::uint64_t d = 1;
  std::vector<SpectrumEntry> entries;  // sorted by serialized value
  bool degenerate = false;

  std::size_t value_count() const { return entries.size(); }
  bool three_valued() const { return entries.size() == 3; }
  std::uint64_t total_multiplicity() const {
    std::uint64_t s = 0;
    for (const auto& e : entries) s += e.multiplicity;
    return s;
  }
  /// sum_u W_u^k over u in F*.
  CycInt moment(unsigned k) const {
    CycInt s(field.p);
    for (const auto& e : entries) s += pow(e.value, k) * BigInt(e.multiplicity);
    return s;
  }
  const SpectrumEntry* find(const CycInt& v) const {
    for (const auto& e : entries)
      if (e.value == v) return &e;
    return nullptr;
  }
  friend bool operator==(const WeilSpectrum&, const WeilSpectrum&) = default;
};

inline WeilSpectrum make_spectrum(const FieldSpec& spec, std::uint64_t d, std::span<const CycInt> values) {
  std::map<CycInt, std::uint64_t> counts;
  for (const auto& v : values) ++counts[v];
  WeilSpectrum s;
  s.field = spec;
  s.d = d;
  s.degenerate = is_degenerate(spec.p, spec.n, d);
  for (auto& [v, c] : counts) s.entries.push_back({v, c});
  std::sort(s.entries.begin(), s.entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value.to_string() < b.value.to_string(); });
  return s;
}

inline WeilSpectrum weil_spectrum(const FieldPtr& field, std::int64_t d, Method method = Method::automatic) {
  const auto values = weil_values(field, d, method);
  const std::uint64_t m = field->group_order();
  return make_spectrum(field->spec(), (static_cast<std::uint64_t>(d) - 1) % m + 1, values);
}

/// The orbit of d under d -> p d (mod q - 1), as exponents in [1, q - 1], sorted.
inline std::vector<std::uint64_t> exponent_orbit(std::uint32_t p, std::uint64_t q, std::uint64_t d) {
  const std::uint64_t m = q - 1;
  std::vector<std::uint64_t> orbit;
  std::uint64_t cur = (d - 1) % m + 1;
  do {
    orbit.push_back(cur);
    cur = cur * p % m;
    if (cur == 0) cur = m;
  } while (cur != orbit.front());
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

/// Smallest representative of each orbit of {d in [1, q-1] : gcd(d, q-1) = 1}
/// under multiplication by p.
inline std::vector<std::uint64_t> canonical_exponent_classes(std::uint32_t p, std::uint64_t q) {
  const std::uint64_t m = q - 1;
  std::vector<bool> seen(m + 1, false);
  std::vector<std::uint64_t> reps;
  for (std::uint64_t d = 1; d <= m; ++d) {
    if (seen[d] || std::gcd(d, m) != 1) continue;
    reps.push_back(d);
    for (auto e : exponent_orbit(p, q, d)) seen[e] = true;
  }
  return reps;
}

inline std::uint64_t canonical_representative(std::uint32_t p, std::uint64_t q, std::uint64_t d) {
  return exponent_orbit(p, q, d).front();
}

}  // namespace weilsum
