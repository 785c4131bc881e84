#pragma once

// Radix-2 complex FFT and rounded integer cyclic convolution of arbitrary length.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace weilsum::fft {

using Complex = std::complex<double>;

/// In-place iterative FFT; size must be a power of two. The inverse is unscaled.
inline void transform(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || !std::has_single_bit(n)) throw std::invalid_argument("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Twiddles are evaluated directly (no recurrence) to keep rounding error at O(eps log n).
  thread_local std::vector<Complex> roots;
  thread_local std::size_t roots_size = 0;
  if (roots_size != n) {
    roots.assign(n / 2, Complex{});
    for (std::size_t k = 0; k < n / 2; ++k)
      roots[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    roots_size = n;
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex w = inverse ? std::conj(roots[k * step]) : roots[k * step];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

/// Padded transform size for a length-m cyclic convolution computed as a
/// linear convolution and folded back.
inline std::size_t padded_size(std::size_t m) { return std::bit_ceil(2 * m - 1); }

inline std::vector<Complex> forward(std::span<const std::int64_t> a, std::size_t size) {
  std::vector<Complex> out(size);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = static_cast<double>(a[i]);
  transform(out, false);
  return out;
}

/// Inverse-transforms a spectrum of a linear convolution and folds it cyclically
/// to length m, rounding each entry to the nearest integer.
inline std::vector<std::int64_t> inverse_folded(std::vector<Complex> spectrum, std::size_t m) {
  const std::size_t size = spectrum.size();
  transform(spectrum, true);
  std::vector<double> folded(m, 0.0);
  for (std::size_t i = 0; i < size; ++i) folded[i % m] += spectrum[i].real();
  std::vector<std::int64_t> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = std::llround(folded[i] / static_cast<double>(size));
  return out;
}

/// c[k] = sum_{i + j == k (mod m)} a[i] b[j], for a, b of equal length m.
/// Exact as long as every |partial sum| stays well below 2^50.
inline std::vector<std::int64_t> cyclic_convolve(std::span<const std::int64_t> a,
                                                 std::span<const std::int64_t> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("cyclic_convolve: length mismatch");
  const std::size_t m = a.size();
  const std::size_t size = padded_size(m);
  auto fa = forward(a, size);
  const auto fb = forward(b, size);
  for (std::size_t i = 0; i < size; ++i) fa[i] *= fb[i];
  return inverse_folded(std::move(fa), m);
}

}  // namespace weilsum::fft
