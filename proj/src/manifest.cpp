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

#include "sxai/manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sxai/error.hpp"

namespace sxai {

namespace {

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::vector<ManifestEntry> ParseManifest(const std::string& json_text,
                                         const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    ThrowFormat(std::string("malformed manifest JSON: ") + e.what());
  }
  if (!doc.is_array()) ThrowFormat("manifest must be a JSON array");

  std::vector<ManifestEntry> entries;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string() ||
        !item.contains("audio") || !item["audio"].is_string()) {
      ThrowFormat("manifest entries need string \"id\" and \"audio\"");
    }
    ManifestEntry e;
    e.id = item["id"].get<std::string>();
    e.audio = Resolve(base_dir, item["audio"].get<std::string>());
    if (item.contains("alignment") && item["alignment"].is_string()) {
      e.alignment = Resolve(base_dir, item["alignment"].get<std::string>());
    }
    if (item.contains("words") && item["words"].is_array()) {
      e.words = item["words"].get<std::vector<std::string>>();
    }
    if (item.contains("labels") && item["labels"].is_object()) {
      for (const auto& [head, cls] : item["labels"].items()) {
        if (cls.is_string()) e.labels[head] = cls.get<std::string>();
      }
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

Dataset LoadDataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) ThrowIo("cannot open manifest " + manifest_path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const auto entries = ParseManifest(ss.str(), manifest_path.parent_path());
  if (entries.empty()) ThrowIo("manifest " + manifest_path.string() + " is empty");

  Dataset ds;
  for (const auto& e : entries) {
    try {
      Waveform w = LoadWaveform(e.audio);
      std::vector<WordSegment> segs;
      // Alignment takes precedence over words.
      if (e.alignment) {
        segs = LoadAlignment(*e.alignment);
      } else if (e.words && !e.words->empty()) {
        segs = UniformAlignment(w, *e.words);
      }
      ds.utterances.push_back(MakeUtterance(e.id, std::move(w), std::move(segs),
                                            e.labels));
    } catch (const Error& err) {
      ds.rejected.push_back({e.id, err.what()});
    }
  }
  return ds;
}

}  // namespace sxai
