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

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sxai {

// Mono PCM buffer. Samples are finite and nominally within [-1, 1].
class Waveform {
 public:
  Waveform(std::vector<float> samples, int sample_rate);

  std::span<const float> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  size_t size() const { return samples_.size(); }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  // Releases the buffer for in-place edits; the caller must rebuild a Waveform.
  std::vector<float> TakeSamples() && { return std::move(samples_); }

  friend bool operator==(const Waveform&, const Waveform&) = default;

 private:
  std::vector<float> samples_;
  int sample_rate_;
};

struct WordSegment {
  std::string text;
  double start_s = 0.0;
  double end_s = 0.0;

  friend bool operator==(const WordSegment&, const WordSegment&) = default;
};

struct Utterance {
  std::string id;
  Waveform waveform;
  std::vector<WordSegment> segments;
  std::map<std::string, std::string> metadata;
  // Load-time normalization notes (e.g. segments dropped after clamping).
  std::vector<std::string> warnings;
};

// RIFF/WAVE, PCM16 or IEEE float32, any channel count (averaged to mono).
Waveform LoadWaveform(const std::filesystem::path& path);
Waveform DecodeWav(std::span<const unsigned char> bytes);

// Always writes mono IEEE float32.
void SaveWaveform(const Waveform& w, const std::filesystem::path& path);
std::vector<unsigned char> EncodeWavFloat32(const Waveform& w);

// Alignment JSON: [{"word": str, "start": sec, "end": sec}, ...]. Output is
// sorted by start; an overlapping earlier segment is truncated to the next
// segment's start.
std::vector<WordSegment> LoadAlignment(const std::filesystem::path& path);
std::vector<WordSegment> ParseAlignment(const std::string& json_text);

// Splits the full duration into |words| equal contiguous spans.
std::vector<WordSegment> UniformAlignment(const Waveform& w,
                                          const std::vector<std::string>& words);

// Clamps segments to the waveform duration and drops the ones that end up
// empty, recording a warning per dropped segment.
Utterance MakeUtterance(std::string id, Waveform waveform,
                        std::vector<WordSegment> segments,
                        std::map<std::string, std::string> metadata = {});

}  // namespace sxai
