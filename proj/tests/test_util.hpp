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

// Independent reference implementations used as test oracles.

#ifndef SXAI_TESTS_TEST_UTIL_HPP_
#define SXAI_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <span>
#include <string>
#include <unistd.h>
#include <vector>

#include "sxai/audio.hpp"
#include "sxai/oracle.hpp"

namespace sxai::testing {

inline Waveform Tone(double hz, double seconds, int sr = 16000, double amp = 1.0) {
  const size_t n = static_cast<size_t>(std::lround(seconds * sr));
  std::vector<float> v(n);
  for (size_t i = 0; i < n; ++i) {
    v[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * i / sr));
  }
  return Waveform(std::move(v), sr);
}

// |DFT|^2 at an arbitrary frequency via a rotating phasor.
inline double DftPower(std::span<const float> x, double hz, int sr) {
  const std::complex<double> step = std::polar(1.0, -2.0 * std::numbers::pi * hz / sr);
  std::complex<double> phasor = 1.0, acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    acc += static_cast<double>(x[i]) * phasor;
    phasor *= step;
    if ((i & 1023) == 1023) phasor /= std::abs(phasor);
  }
  return std::norm(acc);
}

// Dominant frequency: coarse scan then refinement, Hann-windowed.
inline double PeakHz(const Waveform& w, double lo = 50.0, double hi = 2000.0) {
  const auto s = w.samples();
  std::vector<float> x(s.begin(), s.end());
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    x[i] *= static_cast<float>(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  }
  double best = lo, best_p = -1.0;
  double step = 2.0;
  for (double f = lo; f <= hi; f += step) {
    const double p = DftPower(x, f, w.sample_rate());
    if (p > best_p) best_p = p, best = f;
  }
  for (int pass = 0; pass < 2; ++pass) {
    const double centre = best;
    const double fine = step / 10.0;
    for (double f = centre - step; f <= centre + step; f += fine) {
      const double p = DftPower(x, f, w.sample_rate());
      if (p > best_p) best_p = p, best = f;
    }
    step = fine;
  }
  return best;
}

inline double MeanSquare(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc / static_cast<double>(v.size());
}

inline double MeanSquare(std::span<const float> v) {
  double acc = 0.0;
  for (float x : v) acc += static_cast<double>(x) * x;
  return acc / static_cast<double>(v.size());
}

// Reference tone-keyword oracle: direct DFT magnitudes and a plain softmax.
inline std::vector<double> ReferenceToneProbs(const Waveform& w,
                                              const std::vector<double>& class_hz,
                                              double temperature) {
  const auto x = w.samples();
  const double n = static_cast<double>(x.size());
  std::vector<double> logits;
  for (double hz : class_hz) {
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      const double a = 2.0 * std::numbers::pi * hz * static_cast<double>(i) / w.sample_rate();
      re += x[i] * std::cos(a);
      im -= x[i] * std::sin(a);
    }
    const double amp = 2.0 * std::sqrt(re * re + im * im) / n;
    logits.push_back(amp * amp / temperature);
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (auto& l : logits) z += (l = std::exp(l - m));
  for (auto& l : logits) l /= z;
  return logits;
}

// Reference mask: zero [round(start*sr), round(end*sr)).
inline std::vector<float> ReferenceMask(std::span<const float> x, int sr, double start,
                                        double end) {
  std::vector<float> out(x.begin(), x.end());
  const auto a = static_cast<size_t>(std::llround(start * sr));
  const auto b = std::min(out.size(), static_cast<size_t>(std::llround(end * sr)));
  for (size_t i = a; i < b; ++i) out[i] = 0.0f;
  return out;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("sxai_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Counts calls reaching a wrapped oracle.
class CountingOracle final : public Oracle {
 public:
  explicit CountingOracle(const Oracle& inner) : inner_(inner) {}
  const HeadSchema& schema() const override { return inner_.schema(); }
  int sample_rate() const override { return inner_.sample_rate(); }
  size_t predictions() const { return predictions_; }
  size_t calls() const { return calls_; }

 protected:
  Prediction DoPredict(const Waveform& w) const override {
    ++calls_;
    ++predictions_;
    return inner_.Predict(w);
  }
  std::vector<Prediction> DoPredictBatch(std::span<const Waveform> ws) const override {
    ++calls_;
    predictions_ += ws.size();
    return inner_.PredictBatch(ws);
  }

 private:
  const Oracle& inner_;
  mutable std::atomic<size_t> predictions_{0};
  mutable std::atomic<size_t> calls_{0};
};

}  // namespace sxai::testing

#endif  // SXAI_TESTS_TEST_UTIL_HPP_
