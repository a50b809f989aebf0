// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gaborodo {

/// Iterative radix-2 complex FFT with precomputed twiddles. One instance per
/// transform length; reusable across calls (the decoder keeps one per window
/// configuration).
class Fft {
 public:
  explicit Fft(size_t n);  // n must be a power of two >= 2

  size_t size() const { return n_; }

  /// In-place forward DFT, no normalization.
  void forward(std::complex<double>* a) const;
  void forward(std::vector<std::complex<double>>& a) const;

  static size_t next_pow2(size_t n);

 private:
  size_t n_;
  std::vector<size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;
};

}  // namespace gaborodo
