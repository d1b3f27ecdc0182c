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
#include <vector>

#include "sxai/audio.hpp"
#include "sxai/oracle.hpp"

namespace sxai {

// Synthetic benchmark for the tone-keyword oracle. Construction, with
// rng = SplitMix64(seed) consumed in utterance order:
//   - class k ("alpha", "bravo", ...) is a tone at 400 + 200k Hz;
//   - utterance i has 3 + rng%4 words of 0.25 s each, tiling the signal;
//   - its class is i % classes; one word (position rng%n) carries that tone
//     at amplitude 0.5 and is labelled with the class name;
//   - one other word (rng pick) is silence, labelled "pause";
//   - every remaining word is a distractor tone at 2300/2700/3100 Hz
//     ("the"/"please"/"now", amplitude 0.3), except that with probability
//     0.3 the first remaining slot instead carries a different class's tone
//     at amplitude 0.15;
//   - tones have 5 ms raised-cosine ramps; the last word gets a trailing '.'.
struct ToyOptions {
  size_t utterances = 50;
  size_t classes = 4;
  uint64_t seed = 0;
  int sample_rate = 16000;
};

struct ToyDataset {
  ToneOracleConfig oracle;
  std::vector<Utterance> utterances;
};

ToyDataset GenerateToy(const ToyOptions& options);

// Layout: manifest.json, oracle.json, audio/<id>.wav, align/<id>.json.
void WriteToy(const ToyDataset& toy, const std::filesystem::path& out_dir);

}  // namespace sxai
