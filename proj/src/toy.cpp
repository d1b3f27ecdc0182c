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

#include "sxai/toy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "sxai/error.hpp"
#include "sxai/rng.hpp"

namespace sxai {

namespace {

constexpr double kWordSeconds = 0.25;
constexpr double kToneAmplitude = 0.5;
constexpr double kSecondaryAmplitude = 0.15;
constexpr double kDistractorAmplitude = 0.3;
constexpr double kSecondaryProbability = 0.3;
constexpr double kRampSeconds = 0.005;

struct Distractor {
  const char* word;
  double hz;
};
constexpr Distractor kDistractors[] = {{"the", 2300.0}, {"please", 2700.0}, {"now", 3100.0}};

void AddTone(std::vector<float>& buf, size_t begin, size_t len, double hz, double amplitude,
             int sr) {
  const auto ramp = static_cast<size_t>(kRampSeconds * sr);
  for (size_t i = 0; i < len; ++i) {
    double gain = 1.0;
    const size_t edge = std::min(i, len - 1 - i);
    if (edge < ramp) {
      gain = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(edge) /
                                  static_cast<double>(ramp));
    }
    buf[begin + i] = static_cast<float>(
        amplitude * gain * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / sr));
  }
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIo("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) ThrowIo("error writing " + path.string());
}

}  // namespace

ToyDataset GenerateToy(const ToyOptions& options) {
  if (options.utterances == 0) ThrowInvalid("toy dataset needs at least one utterance");
  if (options.sample_rate < 8000) ThrowInvalid("toy sample rate must be at least 8000 Hz");
  ToyDataset toy;
  toy.oracle = DefaultToneConfig(options.classes);
  toy.oracle.sample_rate = options.sample_rate;
  const int sr = options.sample_rate;
  const auto word_len = static_cast<size_t>(std::llround(kWordSeconds * sr));

  SplitMix64 rng(options.seed);
  for (size_t u = 0; u < options.utterances; ++u) {
    const size_t n = 3 + rng.Next() % 4;
    const size_t cls = u % options.classes;
    const size_t tone_pos = rng.Next() % n;
    size_t silence_pos = rng.Next() % (n - 1);
    if (silence_pos >= tone_pos) ++silence_pos;
    const bool secondary = rng.NextUnit() < kSecondaryProbability;
    const size_t secondary_cls = (cls + 1 + rng.Next() % (options.classes - 1)) % options.classes;

    std::vector<float> samples(n * word_len, 0.0f);
    std::vector<std::string> words(n);
    bool secondary_placed = !secondary;
    for (size_t w = 0; w < n; ++w) {
      const size_t begin = w * word_len;
      if (w == tone_pos) {
        AddTone(samples, begin, word_len, toy.oracle.class_hz[cls].second, kToneAmplitude, sr);
        words[w] = toy.oracle.class_hz[cls].first;
      } else if (w == silence_pos) {
        words[w] = "pause";
      } else if (!secondary_placed) {
        AddTone(samples, begin, word_len, toy.oracle.class_hz[secondary_cls].second,
                kSecondaryAmplitude, sr);
        words[w] = toy.oracle.class_hz[secondary_cls].first;
        secondary_placed = true;
      } else {
        const auto& d = kDistractors[rng.Next() % std::size(kDistractors)];
        AddTone(samples, begin, word_len, d.hz, kDistractorAmplitude, sr);
        words[w] = d.word;
      }
    }
    words.back() += ".";

    char id[32];
    std::snprintf(id, sizeof(id), "toy_%04zu", u);
    Waveform wave(std::move(samples), sr);
    std::vector<WordSegment> segs;
    for (size_t w = 0; w < n; ++w) {
      segs.push_back({words[w], static_cast<double>(w * word_len) / sr,
                      static_cast<double>((w + 1) * word_len) / sr});
    }
    toy.utterances.push_back(MakeUtterance(id, std::move(wave), std::move(segs),
                                           {{toy.oracle.head, toy.oracle.class_hz[cls].first}}));
  }
  return toy;
}

void WriteToy(const ToyDataset& toy, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "audio", ec);
  if (ec) ThrowIo("cannot create " + (out_dir / "audio").string() + ": " + ec.message());
  std::filesystem::create_directories(out_dir / "align", ec);
  if (ec) ThrowIo("cannot create " + (out_dir / "align").string() + ": " + ec.message());

  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  for (const auto& utt : toy.utterances) {
    const std::string audio = "audio/" + utt.id + ".wav";
    const std::string align = "align/" + utt.id + ".json";
    SaveWaveform(utt.waveform, out_dir / audio);

    nlohmann::ordered_json segs = nlohmann::ordered_json::array();
    std::vector<std::string> words;
    for (const auto& s : utt.segments) {
      segs.push_back({{"word", s.text}, {"start", s.start_s}, {"end", s.end_s}});
      words.push_back(s.text);
    }
    WriteText(out_dir / align, segs.dump(2) + "\n");

    nlohmann::ordered_json entry;
    entry["id"] = utt.id;
    entry["audio"] = audio;
    entry["alignment"] = align;
    entry["words"] = words;
    entry["labels"] = utt.metadata;
    manifest.push_back(std::move(entry));
  }
  WriteText(out_dir / "manifest.json", manifest.dump(2) + "\n");
  WriteText(out_dir / "oracle.json", ToneConfigToJson(toy.oracle));
}

}  // namespace sxai
