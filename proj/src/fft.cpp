// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/fft.hpp"

#include <cmath>
#include <stdexcept>

#include "gaborodo/common.hpp"

namespace gaborodo {

size_t Fft::next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Fft::Fft(size_t n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft: size must be a power of two >= 2");
  bitrev_.resize(n);
  size_t log2n = 0;
  while ((size_t{1} << log2n) < n) ++log2n;
  for (size_t i = 0; i < n; ++i) {
    size_t r = 0;
    for (size_t b = 0; b < log2n; ++b)
      if (i & (size_t{1} << b)) r |= size_t{1} << (log2n - 1 - b);
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (size_t k = 0; k < n / 2; ++k) {
    double a = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(a), std::sin(a)};
  }
}

void Fft::forward(std::complex<double>* a) const {
  const size_t n = n_;
  for (size_t i = 0; i < n; ++i) {
    size_t j = bitrev_[i];
    if (j > i) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    size_t half = len >> 1;
    size_t step = n / len;
    for (size_t base = 0; base < n; base += len) {
      const std::complex<double>* w = twiddle_.data();
      for (size_t k = 0; k < half; ++k, w += step) {
        std::complex<double> u = a[base + k];
        std::complex<double> v = a[base + k + half] * (*w);
        a[base + k] = u + v;
        a[base + k + half] = u - v;
      }
    }
  }
}

void Fft::forward(std::vector<std::complex<double>>& a) const {
  if (a.size() != n_) throw std::invalid_argument("Fft: buffer size mismatch");
  forward(a.data());
}

}  // namespace gaborodo
