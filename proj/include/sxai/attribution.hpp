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

#include <map>
#include <string>
#include <vector>

#include "sxai/audio.hpp"
#include "sxai/oracle.hpp"
#include "sxai/perturb.hpp"

namespace sxai {

struct WordScore {
  WordSegment segment;
  double r = 0.0;  // f(y=k|x) - f(y=k|x with the segment zeroed)

  friend bool operator==(const WordScore&, const WordScore&) = default;
};

struct WordAttribution {
  std::string utterance_id;
  TargetSpec target;
  double base_prob = 0.0;
  std::vector<WordScore> scores;  // one per segment, in segment order

  friend bool operator==(const WordAttribution&, const WordAttribution&) = default;
};

struct GridDelta {
  double parameter = 0.0;
  double delta = 0.0;  // f(y=k|x) - f(y=k|perturbed x)

  friend bool operator==(const GridDelta&, const GridDelta&) = default;
};

struct DirectionRelevance {
  double relevance = 0.0;  // mean of grid deltas
  std::vector<GridDelta> grid;

  friend bool operator==(const DirectionRelevance&, const DirectionRelevance&) = default;
};

struct ParalinguisticAttribution {
  std::string utterance_id;
  TargetSpec target;
  double base_prob = 0.0;
  std::map<FeatureDirection, DirectionRelevance> directions;

  friend bool operator==(const ParalinguisticAttribution&,
                         const ParalinguisticAttribution&) = default;
};

struct TargetExplanation {
  WordAttribution words;
  ParalinguisticAttribution paralinguistic;

  friend bool operator==(const TargetExplanation&, const TargetExplanation&) = default;
};

struct AttributionReport {
  std::string id;
  std::vector<TargetExplanation> targets;

  friend bool operator==(const AttributionReport&, const AttributionReport&) = default;
};

// n + 1 oracle evaluations issued as one batch: x, then x with each segment
// zeroed. Throws kInvalidArgument when the utterance has no segments.
WordAttribution ComputeWordAttribution(const Oracle& oracle, const Utterance& utt,
                                       const TargetSpec& target);

// Every grid point is applied to x; pitch and stretch split into down/up by
// the side of the identity value. One batch call for base plus all points.
ParalinguisticAttribution ComputeParalinguisticAttribution(const Oracle& oracle,
                                                           const Utterance& utt,
                                                           const TargetSpec& target,
                                                           const GridSet& grids,
                                                           int jobs = 1);

// Word and paralinguistic attribution for each target from one base
// prediction plus one batch over all masks and perturbations. An empty
// target list means the per-head predicted classes.
AttributionReport Explain(const Oracle& oracle, const Utterance& utt,
                          std::vector<TargetSpec> targets, const GridSet& grids,
                          int jobs = 1);

}  // namespace sxai
