/*
 * Copyright 2026 The sxai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sxai/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "sxai/error.hpp"

namespace sxai::dsp {

namespace {

// exp(+2*pi*i*k/n) for k < n/2, cached per thread and size.
const std::vector<std::complex<double>>& Twiddles(size_t n) {
  thread_local std::unordered_map<size_t, std::vector<std::complex<double>>> cache;
  auto& t = cache[n];
  if (t.empty()) {
    t.resize(n / 2);
    for (size_t k = 0; k < n / 2; ++k) {
      t[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(n));
    }
  }
  return t;
}

}  // namespace

size_t NextPowerOfTwo(size_t n) { return n <= 1 ? 1 : std::bit_ceil(n); }

void Fft(std::span<std::complex<double>> data, bool inverse) {
  const size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) ThrowInvalid("FFT size must be a power of two");

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const auto& twiddle = Twiddles(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    const size_t stride = n / len;
    for (size_t start = 0; start < n; start += len) {
      for (size_t k = 0; k < half; ++k) {
        const auto w = twiddle[k * stride];
        const double wr = w.real(), wi = sign * w.imag();
        const auto u = data[start + k];
        const auto x = data[start + k + half];
        const std::complex<double> v(x.real() * wr - x.imag() * wi,
                                     x.real() * wi + x.imag() * wr);
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : data) c *= scale;
  }
}

std::vector<double> Convolve(std::span<const double> a, std::span<const double> b,
                             size_t out_len) {
  if (a.empty() || b.empty()) return std::vector<double>(out_len, 0.0);
  const size_t full = a.size() + b.size() - 1;
  const size_t n = NextPowerOfTwo(full);
  std::vector<std::complex<double>> fa(n), fb(n);
  for (size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  Fft(fa, false);
  Fft(fb, false);
  for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  Fft(fa, true);
  std::vector<double> out(out_len, 0.0);
  for (size_t i = 0; i < out_len && i < full; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace sxai::dsp
