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

#include "sxai/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "sxai/error.hpp"

namespace sxai {

Waveform::Waveform(std::vector<float> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) ThrowInvalid("sample rate must be positive");
  if (samples_.empty()) ThrowInvalid("waveform has no samples");
  for (float s : samples_) {
    if (!std::isfinite(s)) ThrowInvalid("waveform contains non-finite samples");
  }
}

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(std::span<const unsigned char> b, size_t at) {
  return static_cast<uint16_t>(b[at] | (b[at + 1] << 8));
}

uint32_t ReadU32(std::span<const unsigned char> b, size_t at) {
  return static_cast<uint32_t>(b[at]) | (static_cast<uint32_t>(b[at + 1]) << 8) |
         (static_cast<uint32_t>(b[at + 2]) << 16) |
         (static_cast<uint32_t>(b[at + 3]) << 24);
}

void PutU16(std::vector<unsigned char>& out, uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void PutU32(std::vector<unsigned char>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool TagIs(std::span<const unsigned char> b, size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) ThrowIo("error reading " + path.string());
  return ss.str();
}

}  // namespace

Waveform DecodeWav(std::span<const unsigned char> b) {
  if (b.size() < 12 || !TagIs(b, 0, "RIFF") || !TagIs(b, 8, "WAVE")) {
    ThrowFormat("not a RIFF/WAVE file");
  }
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const unsigned char> data;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const uint32_t size = ReadU32(b, pos + 4);
    const size_t body = pos + 8;
    // Truncated trailing chunks are tolerated for data, rejected for fmt.
    const size_t avail = std::min<size_t>(size, b.size() - body);
    if (TagIs(b, pos, "fmt ")) {
      if (avail < 16) ThrowFormat("fmt chunk too short");
      format = ReadU16(b, body);
      channels = ReadU16(b, body + 2);
      rate = ReadU32(b, body + 4);
      bits = ReadU16(b, body + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) ThrowFormat("extensible fmt chunk too short");
        format = ReadU16(b, body + 24);
      }
      have_fmt = true;
    } else if (TagIs(b, pos, "data")) {
      data = b.subspan(body, avail);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) ThrowFormat("missing fmt chunk");
  if (!have_data) ThrowFormat("missing data chunk");
  if (channels == 0) ThrowFormat("zero channels");
  if (rate == 0) ThrowFormat("zero sample rate");

  size_t bytes_per_sample = 0;
  if (format == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == kFormatFloat && bits == 32) {
    bytes_per_sample = 4;
  } else {
    ThrowFormat("unsupported WAV encoding (format " + std::to_string(format) +
                ", " + std::to_string(bits) + " bits); PCM16 and float32 only");
  }
  const size_t frame_bytes = bytes_per_sample * channels;
  const size_t frames = data.size() / frame_bytes;
  if (frames == 0) ThrowFormat("zero-length audio");

  std::vector<float> mono(frames);
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) {
      const size_t at = f * frame_bytes + c * bytes_per_sample;
      if (bytes_per_sample == 2) {
        acc += static_cast<int16_t>(ReadU16(data, at)) / 32768.0;
      } else {
        acc += std::bit_cast<float>(ReadU32(data, at));
      }
    }
    double v = channels == 1 ? acc : acc / channels;
    if (!std::isfinite(v)) ThrowFormat("non-finite sample in WAV data");
    mono[f] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  return Waveform(std::move(mono), static_cast<int>(rate));
}

Waveform LoadWaveform(const std::filesystem::path& path) {
  const std::string bytes = ReadFile(path);
  try {
    return DecodeWav(std::span(reinterpret_cast<const unsigned char*>(bytes.data()),
                               bytes.size()));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<unsigned char> EncodeWavFloat32(const Waveform& w) {
  const uint32_t data_bytes = static_cast<uint32_t>(w.size() * 4);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatFloat);
  PutU16(out, 1);
  PutU32(out, static_cast<uint32_t>(w.sample_rate()));
  PutU32(out, static_cast<uint32_t>(w.sample_rate()) * 4);
  PutU16(out, 4);
  PutU16(out, 32);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (float s : w.samples()) PutU32(out, std::bit_cast<uint32_t>(s));
  return out;
}

void SaveWaveform(const Waveform& w, const std::filesystem::path& path) {
  const auto bytes = EncodeWavFloat32(w);
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIo("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) ThrowIo("error writing " + path.string());
}

std::vector<WordSegment> ParseAlignment(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    ThrowFormat(std::string("malformed alignment JSON: ") + e.what());
  }
  if (!doc.is_array()) ThrowFormat("alignment must be a JSON array");

  std::vector<WordSegment> segs;
  segs.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("start") || !item.contains("end") ||
        !item["start"].is_number() || !item["end"].is_number()) {
      ThrowFormat("alignment entries need numeric \"start\" and \"end\"");
    }
    WordSegment s;
    if (item.contains("word") && item["word"].is_string()) {
      s.text = item["word"].get<std::string>();
    }
    s.start_s = item["start"].get<double>();
    s.end_s = item["end"].get<double>();
    if (!std::isfinite(s.start_s) || !std::isfinite(s.end_s)) {
      ThrowFormat("alignment times must be finite");
    }
    if (s.start_s < 0.0 || s.end_s < 0.0) {
      ThrowFormat("negative alignment time for word \"" + s.text + "\"");
    }
    segs.push_back(std::move(s));
  }

  std::stable_sort(segs.begin(), segs.end(),
                   [](const WordSegment& a, const WordSegment& b) {
                     return a.start_s < b.start_s;
                   });
  for (size_t i = 0; i + 1 < segs.size(); ++i) {
    segs[i].end_s = std::min(segs[i].end_s, segs[i + 1].start_s);
  }
  for (const auto& s : segs) {
    if (!(s.end_s > s.start_s)) {
      ThrowFormat("segment \"" + s.text + "\" has end <= start");
    }
  }
  return segs;
}

std::vector<WordSegment> LoadAlignment(const std::filesystem::path& path) {
  try {
    return ParseAlignment(ReadFile(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<WordSegment> UniformAlignment(const Waveform& w,
                                          const std::vector<std::string>& words) {
  if (words.empty()) ThrowInvalid("uniform alignment needs at least one word");
  const double duration = w.duration();
  const double n = static_cast<double>(words.size());
  std::vector<WordSegment> segs;
  segs.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    const double start = duration * static_cast<double>(i) / n;
    const double end =
        i + 1 == words.size() ? duration : duration * static_cast<double>(i + 1) / n;
    segs.push_back({words[i], start, end});
  }
  return segs;
}

Utterance MakeUtterance(std::string id, Waveform waveform,
                        std::vector<WordSegment> segments,
                        std::map<std::string, std::string> metadata) {
  const double duration = waveform.duration();
  std::vector<WordSegment> kept;
  std::vector<std::string> warnings;
  std::stable_sort(segments.begin(), segments.end(),
                   [](const WordSegment& a, const WordSegment& b) {
                     return a.start_s < b.start_s;
                   });
  for (auto& s : segments) {
    s.end_s = std::min(s.end_s, duration);
    if (!(s.end_s > s.start_s)) {
      warnings.push_back("dropped segment \"" + s.text +
                         "\": empty after clamping to duration");
      continue;
    }
    if (!kept.empty() && kept.back().end_s > s.start_s) {
      kept.back().end_s = s.start_s;
      if (!(kept.back().end_s > kept.back().start_s)) {
        warnings.push_back("dropped segment \"" + kept.back().text +
                           "\": empty after overlap truncation");
        kept.pop_back();
      }
    }
    kept.push_back(std::move(s));
  }
  return Utterance{std::move(id), std::move(waveform), std::move(kept),
                   std::move(metadata), std::move(warnings)};
}

}  // namespace sxai
