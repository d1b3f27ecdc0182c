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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sxai/audio.hpp"

namespace sxai {

enum class Feature { kPitch, kStretch, kNoise, kReverb };

// Display/aggregation key. Pitch and stretch split by parameter side of the
// identity value; noise and reverb have a single direction.
enum class FeatureDirection {
  kPitchDown,
  kPitchUp,
  kStretchDown,
  kStretchUp,
  kReverb,
  kNoise,
};

std::string_view FeatureName(Feature f);
std::optional<Feature> ParseFeature(std::string_view name);
std::string_view DirectionName(FeatureDirection d);
std::optional<FeatureDirection> ParseDirection(std::string_view name);

// Identity parameter per feature: pitch 0, stretch 1, reverb 0, noise +inf.
double IdentityParameter(Feature f);
FeatureDirection DirectionOf(Feature f, double parameter);

struct PerturbationSpec {
  Feature feature = Feature::kPitch;
  // Semitones, stretch rate, SNR in dB or room scale depending on feature.
  double parameter = 0.0;
  uint64_t seed = 0;  // noise only

  bool IsIdentity() const { return parameter == IdentityParameter(feature); }
  // Throws kInvalidArgument when the parameter is out of range.
  void Validate() const;
};

struct PerturbationGrid {
  Feature feature = Feature::kPitch;
  std::vector<double> parameters;  // ascending, identity excluded

  friend bool operator==(const PerturbationGrid&, const PerturbationGrid&) = default;
};

struct GridSet {
  std::vector<PerturbationGrid> grids;
  uint64_t noise_seed = 0;

  // pitch {-4,-2,2,4}; stretch {0.55..0.95, 1.05..1.30} step 0.05;
  // reverb {20..100} step 20; noise {0,5,10,20} dB.
  static GridSet Defaults();
  friend bool operator==(const GridSet&, const GridSet&) = default;
};

// {"pitch": [...], "stretch": [...], "reverb": [...], "noise_snr_db": [...],
//  "noise_seed": int}. Absent keys keep the defaults.
GridSet ParseGridConfig(const std::string& json_text);
GridSet LoadGridConfig(const std::filesystem::path& path);

// Half-open sample span [round(start*sr), round(end*sr)). Throws if the span
// runs past the end of a buffer of `length` samples.
std::pair<size_t, size_t> SegmentSampleRange(const WordSegment& seg, int sample_rate,
                                             size_t length);

Waveform MaskSegment(const Waveform& w, const WordSegment& seg);
Waveform MaskSegments(const Waveform& w, std::span<const WordSegment> segs);
// Zeros everything outside the given segments, inter-word gaps included.
Waveform KeepOnlySegments(const Waveform& w, std::span<const WordSegment> segs);

// |semitones| <= 12. Output length equals input length.
Waveform PitchShift(const Waveform& w, double semitones);

// rate in [0.25, 4]; output length round(len / rate). Phase vocoder with a
// 2048-point Hann window and hop 512.
Waveform TimeStretch(const Waveform& w, double rate);

// Uniform [-1, 1) white noise from SplitMix64(seed).
std::vector<double> WhiteNoise(size_t length, uint64_t seed);
// The noise term g * noise(seed) with g set so that
// 10*log10(mean(x^2) / mean((g*noise)^2)) == snr_db.
std::vector<double> ScaledNoise(const Waveform& w, double snr_db, uint64_t seed);
// clip(w + ScaledNoise(w, snr_db, seed)). snr_db = +inf is the identity.
Waveform AddWhiteNoise(const Waveform& w, double snr_db, uint64_t seed);

// Effective system response of Reverb(): 0.5 * direct tap + 0.5 * a unit-L2
// exponentially decaying noise tail, 0.5 s long, T60 = 0.05 + 0.55*scale/100.
std::vector<double> ReverbImpulseResponse(double room_scale, int sample_rate);
// room_scale in [0, 100]; output truncated to the input length.
Waveform Reverb(const Waveform& w, double room_scale);

Waveform ApplyPerturbation(const PerturbationSpec& spec, const Waveform& w);

}  // namespace sxai
