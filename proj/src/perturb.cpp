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

#include "sxai/perturb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "sxai/error.hpp"
#include "sxai/fft.hpp"
#include "sxai/rng.hpp"

namespace sxai {

namespace {

constexpr size_t kFrameSize = 2048;
constexpr size_t kHop = 512;
constexpr double kMinStretch = 0.25;
constexpr double kMaxStretch = 4.0;
constexpr double kMaxSemitones = 12.0;
constexpr double kReverbLengthS = 0.5;
constexpr uint64_t kReverbSeed = 0x7265766572620001ULL;

constexpr std::array<std::string_view, 6> kDirectionNames = {
    "pitch_down", "pitch_up", "stretch_down", "stretch_up", "reverb", "noise"};

std::vector<float> ToClippedFloat(const std::vector<double>& v) {
  std::vector<float> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(std::clamp(v[i], -1.0, 1.0));
  }
  return out;
}

std::vector<double> ToDouble(std::span<const float> s) {
  return std::vector<double>(s.begin(), s.end());
}

double MeanSquare(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc / static_cast<double>(v.size());
}

std::vector<double> PeriodicHann(size_t n) {
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

double WrapPhase(double p) {
  return p - 2.0 * std::numbers::pi * std::round(p / (2.0 * std::numbers::pi));
}

// Phase-vocoder time scaling of x to exactly out_len samples.
std::vector<double> PhaseVocoder(const std::vector<double>& x, double rate,
                                 size_t out_len) {
  const size_t n = kFrameSize;
  const size_t bins = n / 2 + 1;
  const auto window = PeriodicHann(n);

  // Centered frames over a zero-padded copy.
  std::vector<double> padded(x.size() + n, 0.0);
  std::copy(x.begin(), x.end(), padded.begin() + n / 2);
  const size_t frames = 1 + x.size() / kHop;

  std::vector<std::vector<std::complex<double>>> spec(
      frames + 1, std::vector<std::complex<double>>(bins));
  std::vector<std::complex<double>> buf(n);
  for (size_t m = 0; m < frames; ++m) {
    for (size_t i = 0; i < n; ++i) buf[i] = padded[m * kHop + i] * window[i];
    dsp::Fft(buf, false);
    std::copy(buf.begin(), buf.begin() + bins, spec[m].begin());
  }
  // spec[frames] stays zero so interpolation past the last frame fades out.

  std::vector<double> expected(bins);
  for (size_t k = 0; k < bins; ++k) {
    expected[k] = 2.0 * std::numbers::pi * static_cast<double>(k * kHop) /
                  static_cast<double>(n);
  }
  std::vector<double> phase(bins);
  for (size_t k = 0; k < bins; ++k) phase[k] = std::arg(spec[0][k]);

  std::vector<std::vector<std::complex<double>>> out_frames;
  for (size_t j = 0;; ++j) {
    const double t = static_cast<double>(j) * rate;
    if (t >= static_cast<double>(frames)) break;
    const size_t lo = static_cast<size_t>(t);
    const double alpha = t - static_cast<double>(lo);
    std::vector<std::complex<double>> frame(bins);
    for (size_t k = 0; k < bins; ++k) {
      const double mag =
          (1.0 - alpha) * std::abs(spec[lo][k]) + alpha * std::abs(spec[lo + 1][k]);
      frame[k] = std::polar(mag, phase[k]);
      const double dphi = WrapPhase(std::arg(spec[lo + 1][k]) - std::arg(spec[lo][k]) -
                                    expected[k]);
      phase[k] += expected[k] + dphi;
    }
    out_frames.push_back(std::move(frame));
  }

  const size_t total = (out_frames.size() - 1) * kHop + n;
  std::vector<double> y(total, 0.0), norm(total, 0.0);
  for (size_t j = 0; j < out_frames.size(); ++j) {
    for (size_t k = 0; k < bins; ++k) buf[k] = out_frames[j][k];
    for (size_t k = bins; k < n; ++k) buf[k] = std::conj(out_frames[j][n - k]);
    dsp::Fft(buf, true);
    for (size_t i = 0; i < n; ++i) {
      y[j * kHop + i] += buf[i].real() * window[i];
      norm[j * kHop + i] += window[i] * window[i];
    }
  }
  std::vector<double> out(out_len, 0.0);
  for (size_t i = 0; i < out_len; ++i) {
    const size_t src = i + n / 2;
    if (src >= total) break;
    out[i] = norm[src] > 1e-10 ? y[src] / norm[src] : 0.0;
  }
  return out;
}

void RequireParameterFinite(double v, const char* what) {
  if (!std::isfinite(v)) ThrowInvalid(std::string(what) + " must be finite");
}

}  // namespace

std::string_view FeatureName(Feature f) {
  switch (f) {
    case Feature::kPitch: return "pitch";
    case Feature::kStretch: return "stretch";
    case Feature::kNoise: return "noise";
    case Feature::kReverb: return "reverb";
  }
  return "unknown";
}

std::optional<Feature> ParseFeature(std::string_view name) {
  for (Feature f : {Feature::kPitch, Feature::kStretch, Feature::kNoise, Feature::kReverb}) {
    if (FeatureName(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view DirectionName(FeatureDirection d) {
  return kDirectionNames[static_cast<size_t>(d)];
}

std::optional<FeatureDirection> ParseDirection(std::string_view name) {
  for (size_t i = 0; i < kDirectionNames.size(); ++i) {
    if (kDirectionNames[i] == name) return static_cast<FeatureDirection>(i);
  }
  return std::nullopt;
}

double IdentityParameter(Feature f) {
  switch (f) {
    case Feature::kPitch: return 0.0;
    case Feature::kStretch: return 1.0;
    case Feature::kReverb: return 0.0;
    case Feature::kNoise: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

FeatureDirection DirectionOf(Feature f, double parameter) {
  switch (f) {
    case Feature::kPitch:
      return parameter < 0.0 ? FeatureDirection::kPitchDown : FeatureDirection::kPitchUp;
    case Feature::kStretch:
      return parameter < 1.0 ? FeatureDirection::kStretchDown
                             : FeatureDirection::kStretchUp;
    case Feature::kReverb: return FeatureDirection::kReverb;
    case Feature::kNoise: return FeatureDirection::kNoise;
  }
  return FeatureDirection::kNoise;
}

void PerturbationSpec::Validate() const {
  switch (feature) {
    case Feature::kPitch:
      RequireParameterFinite(parameter, "pitch shift");
      if (std::abs(parameter) > kMaxSemitones) {
        ThrowInvalid("pitch shift must be within +-12 semitones");
      }
      break;
    case Feature::kStretch:
      RequireParameterFinite(parameter, "stretch rate");
      if (parameter < kMinStretch || parameter > kMaxStretch) {
        ThrowInvalid("stretch rate must be within [0.25, 4]");
      }
      break;
    case Feature::kReverb:
      RequireParameterFinite(parameter, "room scale");
      if (parameter < 0.0 || parameter > 100.0) {
        ThrowInvalid("room scale must be within [0, 100]");
      }
      break;
    case Feature::kNoise:
      if (std::isnan(parameter) || parameter == -std::numeric_limits<double>::infinity()) {
        ThrowInvalid("noise SNR must be finite (or +inf for identity)");
      }
      break;
  }
}

GridSet GridSet::Defaults() {
  GridSet g;
  g.grids.push_back({Feature::kPitch, {-4.0, -2.0, 2.0, 4.0}});
  PerturbationGrid stretch{Feature::kStretch, {}};
  for (int c = 55; c <= 95; c += 5) stretch.parameters.push_back(c / 100.0);
  for (int c = 105; c <= 130; c += 5) stretch.parameters.push_back(c / 100.0);
  g.grids.push_back(std::move(stretch));
  g.grids.push_back({Feature::kReverb, {20.0, 40.0, 60.0, 80.0, 100.0}});
  g.grids.push_back({Feature::kNoise, {0.0, 5.0, 10.0, 20.0}});
  return g;
}

GridSet ParseGridConfig(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    ThrowFormat(std::string("malformed grid config: ") + e.what());
  }
  if (!doc.is_object()) ThrowFormat("grid config must be a JSON object");

  GridSet out = GridSet::Defaults();
  const std::pair<const char*, Feature> keys[] = {{"pitch", Feature::kPitch},
                                                  {"stretch", Feature::kStretch},
                                                  {"reverb", Feature::kReverb},
                                                  {"noise_snr_db", Feature::kNoise}};
  for (const auto& [key, feature] : keys) {
    if (!doc.contains(key)) continue;
    const auto& arr = doc[key];
    if (!arr.is_array()) ThrowFormat(std::string("grid \"") + key + "\" must be an array");
    PerturbationGrid grid{feature, {}};
    for (const auto& v : arr) {
      if (!v.is_number()) ThrowFormat(std::string("grid \"") + key + "\" must hold numbers");
      const double p = v.get<double>();
      PerturbationSpec{feature, p, 0}.Validate();
      if (p == IdentityParameter(feature)) {
        ThrowInvalid(std::string("grid \"") + key + "\" must not contain the identity value");
      }
      grid.parameters.push_back(p);
    }
    if (grid.parameters.empty()) ThrowInvalid(std::string("grid \"") + key + "\" is empty");
    std::sort(grid.parameters.begin(), grid.parameters.end());
    if (std::adjacent_find(grid.parameters.begin(), grid.parameters.end()) !=
        grid.parameters.end()) {
      ThrowInvalid(std::string("grid \"") + key + "\" has duplicate values");
    }
    for (auto& g : out.grids) {
      if (g.feature == feature) g = grid;
    }
  }
  if (doc.contains("noise_seed")) {
    if (!doc["noise_seed"].is_number_integer()) ThrowFormat("noise_seed must be an integer");
    out.noise_seed = doc["noise_seed"].get<uint64_t>();
  }
  return out;
}

GridSet LoadGridConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) ThrowIo("cannot open grid config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseGridConfig(ss.str());
}

std::pair<size_t, size_t> SegmentSampleRange(const WordSegment& seg, int sample_rate,
                                             size_t length) {
  if (seg.start_s < 0.0 || !(seg.end_s >= seg.start_s)) {
    ThrowInvalid("segment \"" + seg.text + "\" has invalid bounds");
  }
  const auto begin = static_cast<size_t>(std::llround(seg.start_s * sample_rate));
  const auto end = static_cast<size_t>(std::llround(seg.end_s * sample_rate));
  if (end > length) ThrowInvalid("segment \"" + seg.text + "\" lies outside the waveform");
  return {begin, end};
}

Waveform MaskSegment(const Waveform& w, const WordSegment& seg) {
  return MaskSegments(w, std::span(&seg, 1));
}

Waveform MaskSegments(const Waveform& w, std::span<const WordSegment> segs) {
  std::vector<float> s(w.samples().begin(), w.samples().end());
  for (const auto& seg : segs) {
    const auto [b, e] = SegmentSampleRange(seg, w.sample_rate(), s.size());
    std::fill(s.begin() + static_cast<std::ptrdiff_t>(b),
              s.begin() + static_cast<std::ptrdiff_t>(e), 0.0f);
  }
  return Waveform(std::move(s), w.sample_rate());
}

Waveform KeepOnlySegments(const Waveform& w, std::span<const WordSegment> segs) {
  const auto src = w.samples();
  std::vector<float> s(src.size(), 0.0f);
  for (const auto& seg : segs) {
    const auto [b, e] = SegmentSampleRange(seg, w.sample_rate(), s.size());
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(b),
              src.begin() + static_cast<std::ptrdiff_t>(e),
              s.begin() + static_cast<std::ptrdiff_t>(b));
  }
  return Waveform(std::move(s), w.sample_rate());
}

Waveform TimeStretch(const Waveform& w, double rate) {
  PerturbationSpec{Feature::kStretch, rate, 0}.Validate();
  if (rate == 1.0) return w;
  const auto out_len = static_cast<size_t>(
      std::max<long long>(1, std::llround(static_cast<double>(w.size()) / rate)));
  return Waveform(ToClippedFloat(PhaseVocoder(ToDouble(w.samples()), rate, out_len)),
                  w.sample_rate());
}

Waveform PitchShift(const Waveform& w, double semitones) {
  PerturbationSpec{Feature::kPitch, semitones, 0}.Validate();
  if (semitones == 0.0) return w;
  // Stretch by 2^(st/12) with pitch held, then resample back to the input
  // length, which scales every frequency by 2^(st/12).
  const double rate = std::exp2(-semitones / 12.0);
  const auto stretched_len = static_cast<size_t>(
      std::max<long long>(1, std::llround(static_cast<double>(w.size()) / rate)));
  const auto y = PhaseVocoder(ToDouble(w.samples()), rate, stretched_len);

  std::vector<double> out(w.size(), 0.0);
  for (size_t i = 0; i < out.size(); ++i) {
    const double pos = static_cast<double>(i) / rate;
    const auto lo = static_cast<size_t>(pos);
    if (lo >= y.size()) break;
    const double frac = pos - static_cast<double>(lo);
    const double next = lo + 1 < y.size() ? y[lo + 1] : 0.0;
    out[i] = y[lo] + frac * (next - y[lo]);
  }
  return Waveform(ToClippedFloat(out), w.sample_rate());
}

std::vector<double> WhiteNoise(size_t length, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> n(length);
  for (auto& v : n) v = rng.NextSigned();
  return n;
}

std::vector<double> ScaledNoise(const Waveform& w, double snr_db, uint64_t seed) {
  RequireParameterFinite(snr_db, "noise SNR");
  const auto x = ToDouble(w.samples());
  const double signal_power = MeanSquare(x);
  if (signal_power == 0.0) ThrowInvalid("cannot set an SNR on an all-zero signal");
  auto noise = WhiteNoise(x.size(), seed);
  const double noise_power = MeanSquare(noise);
  const double gain = std::sqrt(signal_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  for (auto& v : noise) v *= gain;
  return noise;
}

Waveform AddWhiteNoise(const Waveform& w, double snr_db, uint64_t seed) {
  PerturbationSpec{Feature::kNoise, snr_db, seed}.Validate();
  if (snr_db == IdentityParameter(Feature::kNoise)) return w;
  auto mix = ScaledNoise(w, snr_db, seed);
  const auto s = w.samples();
  for (size_t i = 0; i < mix.size(); ++i) mix[i] += s[i];
  return Waveform(ToClippedFloat(mix), w.sample_rate());
}

std::vector<double> ReverbImpulseResponse(double room_scale, int sample_rate) {
  PerturbationSpec{Feature::kReverb, room_scale, 0}.Validate();
  if (sample_rate <= 0) ThrowInvalid("sample rate must be positive");
  const auto length = static_cast<size_t>(std::llround(kReverbLengthS * sample_rate));
  const double t60 = 0.05 + 0.55 * (room_scale / 100.0);
  // Amplitude falls by 60 dB (x1000) over t60.
  const double tau = t60 / std::log(1000.0);

  SplitMix64 rng(kReverbSeed);
  std::vector<double> tail(length);
  tail[0] = 1.0;
  for (size_t i = 1; i < length; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    tail[i] = rng.NextSigned() * std::exp(-t / tau);
  }
  double energy = 0.0;
  for (double v : tail) energy += v * v;
  const double norm = 1.0 / std::sqrt(energy);

  std::vector<double> ir(length);
  for (size_t i = 0; i < length; ++i) ir[i] = 0.5 * tail[i] * norm;
  ir[0] += 0.5;
  return ir;
}

Waveform Reverb(const Waveform& w, double room_scale) {
  PerturbationSpec{Feature::kReverb, room_scale, 0}.Validate();
  if (room_scale == 0.0) return w;
  const auto ir = ReverbImpulseResponse(room_scale, w.sample_rate());
  const auto x = ToDouble(w.samples());
  return Waveform(ToClippedFloat(dsp::Convolve(x, ir, x.size())), w.sample_rate());
}

Waveform ApplyPerturbation(const PerturbationSpec& spec, const Waveform& w) {
  spec.Validate();
  switch (spec.feature) {
    case Feature::kPitch: return PitchShift(w, spec.parameter);
    case Feature::kStretch: return TimeStretch(w, spec.parameter);
    case Feature::kNoise: return AddWhiteNoise(w, spec.parameter, spec.seed);
    case Feature::kReverb: return Reverb(w, spec.parameter);
  }
  ThrowInvalid("unknown perturbation feature");
}

}  // namespace sxai
