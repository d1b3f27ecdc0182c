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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sxai/audio.hpp"

namespace sxai {

struct ManifestEntry {
  std::string id;
  std::filesystem::path audio;
  std::optional<std::filesystem::path> alignment;
  std::optional<std::vector<std::string>> words;
  std::map<std::string, std::string> labels;
};

struct RejectedEntry {
  std::string id;
  std::string reason;
};

struct Dataset {
  std::vector<Utterance> utterances;
  std::vector<RejectedEntry> rejected;
};

// Relative paths are resolved against the manifest's directory.
std::vector<ManifestEntry> ParseManifest(const std::string& json_text,
                                         const std::filesystem::path& base_dir);

// Loads every entry; unloadable ones are reported in `rejected`. An empty
// manifest is an I/O error.
Dataset LoadDataset(const std::filesystem::path& manifest_path);

}  // namespace sxai
