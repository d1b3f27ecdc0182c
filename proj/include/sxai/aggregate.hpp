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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sxai/attribution.hpp"

namespace sxai {

// Lowercase, drop Unicode punctuation (general category P*), trim whitespace.
std::string NormalizeWord(std::string_view text);

struct ClassImportance {
  std::string cls;
  double mean = 0.0;
  size_t count = 0;

  friend bool operator==(const ClassImportance&, const ClassImportance&) = default;
};

struct WordImportance {
  std::string word;
  double key = 0.0;  // max over classes of the class mean
  std::vector<ClassImportance> classes;  // sorted by class name

  friend bool operator==(const WordImportance&, const WordImportance&) = default;
};

struct HeadWordSummary {
  std::string head;
  // Every word seen, by descending key then word; the first top_m are the
  // selection.
  std::vector<WordImportance> words;

  friend bool operator==(const HeadWordSummary&, const HeadWordSummary&) = default;
};

struct GlobalWordSummary {
  size_t top_m = 15;
  std::vector<HeadWordSummary> heads;  // sorted by head name

  std::span<const WordImportance> Top(size_t head_index) const;
  friend bool operator==(const GlobalWordSummary&, const GlobalWordSummary&) = default;
};

struct DirectionMean {
  double mean = 0.0;
  size_t count = 0;

  friend bool operator==(const DirectionMean&, const DirectionMean&) = default;
};

struct HeadParalinguisticSummary {
  std::string head;
  std::map<FeatureDirection, DirectionMean> directions;

  friend bool operator==(const HeadParalinguisticSummary&,
                         const HeadParalinguisticSummary&) = default;
};

struct GlobalParalinguisticSummary {
  std::vector<HeadParalinguisticSummary> heads;  // sorted by head name

  friend bool operator==(const GlobalParalinguisticSummary&,
                         const GlobalParalinguisticSummary&) = default;
};

struct GlobalSummary {
  GlobalWordSummary words;
  GlobalParalinguisticSummary paralinguistic;

  friend bool operator==(const GlobalSummary&, const GlobalSummary&) = default;
};

// Groups word scores by (normalized word, head, target class). Group means are
// summed in sorted order so the result does not depend on report order.
GlobalWordSummary SummarizeWords(std::span<const AttributionReport> reports, size_t top_m = 15);
GlobalParalinguisticSummary SummarizeParalinguistic(std::span<const AttributionReport> reports);

}  // namespace sxai
