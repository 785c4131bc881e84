#pragma once

// The group algebra over F* with Z[zeta_p] coefficients.
//
// An element sum_u S_u [u] is stored by discrete logarithm: coeffs[i] is the
// coefficient of [g^i], so multiplication in F* is addition of indices mod q - 1
// and the algebra product is a cyclic convolution of length q - 1.

#include "weilsum/cyclotomic.hpp"
#include "weilsum/fft.hpp"
#include "weilsum/finite_field.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace weilsum {

class GAElem {
 public:
  /// The zero element.
  explicit GAElem(FieldPtr field)
      : field_(std::move(field)), coeffs_(field_->group_order(), CycInt(field_->p())) {}
  GAElem(FieldPtr field, std::vector<CycInt> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != field_->group_order()) throw std::invalid_argument("GAElem: length must be q - 1");
    for (const auto& c : coeffs_)
      if (c.prime() != field_->p()) throw std::invalid_argument("GAElem: coefficient over wrong prime");
  }

  /// [g^index] scaled by `value`.
  static GAElem basis(FieldPtr field, std::uint32_t index, const CycInt& value) {
    GAElem e(std::move(field));
    e.coeffs_.at(index) = value;
    return e;
  }
  /// [1], the multiplicative identity.
  static GAElem unit(FieldPtr field) {
    const auto p = field->p();
    return basis(std::move(field), 0, CycInt(p, BigInt(1)));
  }
  /// F* itself, i.e. the sum of all [u].
  static GAElem all_ones(FieldPtr field) {
    const auto p = field->p();
    const auto m = field->group_order();
    return GAElem(std::move(field), std::vector<CycInt>(m, CycInt(p, BigInt(1))));
  }
  template <typename Int>
  static GAElem from_integers(FieldPtr field, std::span<const Int> values) {
    const auto p = field->p();
    std::vector<CycInt> c;
    c.reserve(values.size());
    for (const auto& v : values) c.emplace_back(p, BigInt(v));
    return GAElem(std::move(field), std::move(c));
  }

  const FieldTables& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  std::uint32_t prime() const { return field_->p(); }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<CycInt>& coeffs() const { return coeffs_; }
  const CycInt& operator[](std::size_t i) const { return coeffs_[i]; }
  CycInt& operator[](std::size_t i) { return coeffs_[i]; }

  GAElem& operator+=(const GAElem& o) {
    same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  GAElem& operator-=(const GAElem& o) {
    same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  friend GAElem operator+(GAElem a, const GAElem& b) { return a += b; }
  friend GAElem operator-(GAElem a, const GAElem& b) { return a -= b; }
  friend GAElem operator*(const BigInt& k, GAElem a) {
    for (auto& c : a.coeffs_) c *= k;
    return a;
  }
  friend GAElem operator*(const CycInt& k, GAElem a) {
    for (auto& c : a.coeffs_) c *= k;
    return a;
  }
  friend bool operator==(const GAElem& a, const GAElem& b) {
    return a.field_->spec() == b.field_->spec() && a.coeffs_ == b.coeffs_;
  }

  void same_field(const GAElem& o) const {
    if (field_ != o.field_ && !(field_->spec() == o.field_->spec()))
      throw std::invalid_argument("GAElem: elements belong to different fields");
  }

 private:
  FieldPtr field_;
  std::vector<CycInt> coeffs_;
};

/// Psi = sum_u psi(u) [u], with psi(u) = zeta^Tr(u).
inline GAElem psi_element(const FieldPtr& field) {
  const auto p = field->p();
  const auto m = field->group_order();
  std::vector<CycInt> c;
  c.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) c.push_back(CycInt::zeta_power(p, field->trace(field->exp(i))));
  return GAElem(field, std::move(c));
}

/// |S| = sum of all coefficients.
inline CycInt weight(const GAElem& s) {
  CycInt w(s.prime());
  for (const auto& c : s.coeffs()) w += c;
  return w;
}

/// S^(t) = sum_u S_u [u^t]; coefficients collide (and add) when gcd(t, q - 1) != 1.
inline GAElem reindex_power(const GAElem& s, std::int64_t t) {
  const std::uint64_t m = s.size();
  const std::uint64_t tt = mod_exponent(t, m);
  GAElem out(s.field_ptr());
  for (std::uint64_t i = 0; i < m; ++i) out[(i * tt) % m] += s[i];
  return out;
}

/// conj(S) = sum_u conj(S_u) [u^-1].
inline GAElem conjugate(const GAElem& s) {
  const std::size_t m = s.size();
  GAElem out(s.field_ptr());
  for (std::size_t i = 0; i < m; ++i) out[(m - i) % m] = conj(s[i]);
  return out;
}

namespace detail {

// Splits S into the integer vectors of each power-basis coordinate.
// Returns false if some coefficient does not fit in 32 bits.
inline bool split_components(const GAElem& s, std::vector<std::vector<std::int64_t>>& comps,
                             std::int64_t& max_abs) {
  const std::size_t basis = s.prime() - 1;
  comps.assign(basis, std::vector<std::int64_t>(s.size(), 0));
  max_abs = 0;
  const BigInt limit = BigInt(1) << 31;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& c = s[i].coeffs();
    for (std::size_t j = 0; j < basis; ++j) {
      if (c[j].is_zero()) continue;
      if (abs(c[j]) >= limit) return false;
      const auto v = static_cast<std::int64_t>(c[j]);
      comps[j][i] = v;
      max_abs = std::max(max_abs, v < 0 ? -v : v);
    }
  }
  return true;
}

// Largest |entry| of any intermediate integer convolution for which double
// FFT rounding is exact with a wide margin.
inline constexpr double kFftExactBound = 0x1p40;

}  // namespace detail

/// Exact O(m^2) product; the reference the FFT path is checked against.
/// Runs on 64-bit integer coordinates when no sum can overflow, on BigInt otherwise.
inline GAElem convolve_schoolbook(const GAElem& a, const GAElem& b) {
  a.same_field(b);
  const std::size_t m = a.size();
  const std::uint32_t p = a.prime();
  const std::size_t basis = p - 1;
  std::vector<std::vector<std::int64_t>> ca, cb;
  std::int64_t max_a = 0, max_b = 0;
  if (detail::split_components(a, ca, max_a) && detail::split_components(b, cb, max_b) &&
      static_cast<double>(max_a) * static_cast<double>(max_b) * static_cast<double>(m) * static_cast<double>(basis) <
          0x1p62) {
    // acc[k * p + s] = coefficient of zeta^s in the raw product at index k.
    std::vector<std::int64_t> acc(m * p, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < basis; ++j) {
        const std::int64_t x = ca[j][i];
        if (x == 0) continue;
        for (std::size_t l = 0; l < basis; ++l) {
          const auto& row = cb[l];
          const std::size_t s = (j + l) % p;
          for (std::size_t r = 0; r < m; ++r) {
            if (row[r] == 0) continue;
            const std::size_t k = i + r >= m ? i + r - m : i + r;
            acc[k * p + s] += x * row[r];
          }
        }
      }
    }
    std::vector<CycInt> out;
    out.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<BigInt> c(p);
      for (std::size_t s = 0; s < p; ++s) c[s] = acc[k * p + s];
      out.emplace_back(p, std::move(c));
    }
    return GAElem(a.field_ptr(), std::move(out));
  }
  GAElem out(a.field_ptr());
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (b[j].is_zero()) continue;
      const std::size_t k = i + j >= m ? i + j - m : i + j;
      out[k] += a[i] * b[j];
    }
  }
  return out;
}

/// Product via floating-point FFT on each pair of power-basis coordinates,
/// rounded to integers. Returns nullopt if the magnitude bound does not
/// guarantee exact rounding.
inline std::optional<GAElem> convolve_fft(const GAElem& a, const GAElem& b) {
  a.same_field(b);
  const std::uint32_t p = a.prime();
  const std::size_t m = a.size();
  const std::size_t basis = p - 1;
  std::vector<std::vector<std::int64_t>> ca, cb;
  std::int64_t max_a = 0, max_b = 0;
  if (!detail::split_components(a, ca, max_a) || !detail::split_components(b, cb, max_b)) return std::nullopt;
  const double bound = static_cast<double>(max_a) * static_cast<double>(max_b) * static_cast<double>(m) *
                       static_cast<double>(basis);
  if (bound >= detail::kFftExactBound) return std::nullopt;
  if (max_a == 0 || max_b == 0) return GAElem(a.field_ptr());

  const std::size_t size = fft::padded_size(m);
  std::vector<std::vector<fft::Complex>> fa(basis), fb(basis);
  std::vector<bool> nz_a(basis), nz_b(basis);
  for (std::size_t j = 0; j < basis; ++j) {
    nz_a[j] = std::any_of(ca[j].begin(), ca[j].end(), [](auto v) { return v != 0; });
    nz_b[j] = std::any_of(cb[j].begin(), cb[j].end(), [](auto v) { return v != 0; });
    if (nz_a[j]) fa[j] = fft::forward(ca[j], size);
    if (nz_b[j]) fb[j] = fft::forward(cb[j], size);
  }
  // Coordinate s of the raw product collects zeta^(j+k) with j + k == s.
  std::vector<std::vector<BigInt>> full(m, std::vector<BigInt>(p));
  for (std::size_t s = 0; s + 1 < 2 * basis; ++s) {
    std::vector<fft::Complex> acc;
    for (std::size_t j = 0; j < basis; ++j) {
      if (s < j || s - j >= basis || !nz_a[j] || !nz_b[s - j]) continue;
      if (acc.empty()) acc.assign(size, fft::Complex{});
      const auto& x = fa[j];
      const auto& y = fb[s - j];
      for (std::size_t i = 0; i < size; ++i) acc[i] += x[i] * y[i];
    }
    if (acc.empty()) continue;
    const auto r = fft::inverse_folded(std::move(acc), m);
    for (std::size_t i = 0; i < m; ++i)
      if (r[i] != 0) full[i][s % p] += r[i];
  }
  std::vector<CycInt> out;
  out.reserve(m);
  for (auto& f : full) out.emplace_back(p, std::move(f));
  return GAElem(a.field_ptr(), std::move(out));
}

/// (S T)_w = sum_{uv = w} S_u T_v. Uses the FFT path when its rounding is
/// provably exact, the schoolbook path otherwise.
inline GAElem convolve(const GAElem& a, const GAElem& b) {
  if (a.size() > 64) {
    if (auto r = convolve_fft(a, b)) return std::move(*r);
  }
  return convolve_schoolbook(a, b);
}

inline GAElem operator*(const GAElem& a, const GAElem& b) { return convolve(a, b); }

/// W = sum_u W_{F,d}(u) [u], built as Psi Psi^(-1/d) + F*.
inline GAElem weil_element(const FieldPtr& field, std::int64_t d) {
  const std::uint64_t m = field->group_order();
  const std::uint64_t dinv = inverse_exponent(d, m);
  const GAElem psi = psi_element(field);
  const std::int64_t t = -static_cast<std::int64_t>(dinv);
  return convolve(psi, reindex_power(psi, t)) + GAElem::all_ones(field);
}

/// chi(S) for the character with chi(g) = exp(2 pi i chi_index / (q - 1)).
/// Floating point; diagnostics only.
inline std::complex<double> fourier_coefficient(const GAElem& s, std::uint64_t chi_index) {
  const std::size_t m = s.size();
  std::complex<double> z = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (s[i].is_zero()) continue;
    const auto e = static_cast<double>((chi_index % m) * i % m);
    z += s[i].to_complex() * std::polar(1.0, 2.0 * std::numbers::pi * e / static_cast<double>(m));
  }
  return z;
}

}  // namespace weilsum
