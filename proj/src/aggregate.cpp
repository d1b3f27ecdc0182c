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

#include "sxai/aggregate.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <tuple>

#include "sxai/error.hpp"

namespace sxai {

namespace {

// Sorting first makes the floating-point sum independent of input order.
double OrderFreeMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::string NormalizeWord(std::string_view text) {
  std::vector<UChar32> cps;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  for (int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0 || u_ispunct(c)) continue;  // malformed bytes are dropped too
    cps.push_back(u_tolower(c));
  }
  auto first = std::find_if_not(cps.begin(), cps.end(), [](UChar32 c) { return u_isUWhiteSpace(c); });
  auto last = std::find_if_not(cps.rbegin(), cps.rend(), [](UChar32 c) { return u_isUWhiteSpace(c); }).base();

  std::string out;
  for (auto it = first; it < last; ++it) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, *it, error);
    if (!error) out.append(reinterpret_cast<const char*>(buf), static_cast<size_t>(n));
  }
  return out;
}

std::span<const WordImportance> GlobalWordSummary::Top(size_t head_index) const {
  const auto& words = heads.at(head_index).words;
  return std::span(words).first(std::min(top_m, words.size()));
}

GlobalWordSummary SummarizeWords(std::span<const AttributionReport> reports, size_t top_m) {
  if (reports.empty()) ThrowInvalid("no reports to summarize");
  // head -> word -> class -> scores
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>> groups;
  for (const auto& report : reports) {
    for (const auto& t : report.targets) {
      for (const auto& s : t.words.scores) {
        groups[t.words.target.head][NormalizeWord(s.segment.text)][t.words.target.cls]
            .push_back(s.r);
      }
    }
  }

  GlobalWordSummary summary;
  summary.top_m = top_m;
  for (auto& [head, words] : groups) {
    HeadWordSummary hs{head, {}};
    for (auto& [word, classes] : words) {
      WordImportance wi{word, 0.0, {}};
      for (auto& [cls, values] : classes) {
        wi.classes.push_back({cls, OrderFreeMean(values), values.size()});
      }
      wi.key = std::max_element(wi.classes.begin(), wi.classes.end(),
                                [](const ClassImportance& a, const ClassImportance& b) {
                                  return a.mean < b.mean;
                                })
                   ->mean;
      hs.words.push_back(std::move(wi));
    }
    std::sort(hs.words.begin(), hs.words.end(),
              [](const WordImportance& a, const WordImportance& b) {
                return std::tie(b.key, a.word) < std::tie(a.key, b.word);
              });
    summary.heads.push_back(std::move(hs));
  }
  return summary;
}

GlobalParalinguisticSummary SummarizeParalinguistic(std::span<const AttributionReport> reports) {
  if (reports.empty()) ThrowInvalid("no reports to summarize");
  std::map<std::string, std::map<FeatureDirection, std::vector<double>>> groups;
  for (const auto& report : reports) {
    for (const auto& t : report.targets) {
      for (const auto& [dir, rel] : t.paralinguistic.directions) {
        groups[t.paralinguistic.target.head][dir].push_back(rel.relevance);
      }
    }
  }
  GlobalParalinguisticSummary summary;
  for (auto& [head, dirs] : groups) {
    HeadParalinguisticSummary hs{head, {}};
    for (auto& [dir, values] : dirs) {
      hs.directions[dir] = {OrderFreeMean(values), values.size()};
    }
    summary.heads.push_back(std::move(hs));
  }
  return summary;
}

}  // namespace sxai
