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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sxai::dsp {

// In-place iterative radix-2 FFT. data.size() must be a power of two. The
// inverse transform includes the 1/N scale.
void Fft(std::span<std::complex<double>> data, bool inverse);

size_t NextPowerOfTwo(size_t n);

// Linear convolution via FFT; returns the first out_len samples of a * b.
std::vector<double> Convolve(std::span<const double> a, std::span<const double> b,
                             size_t out_len);

}  // namespace sxai::dsp
