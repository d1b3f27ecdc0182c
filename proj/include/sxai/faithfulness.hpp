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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sxai/manifest.hpp"
#include "sxai/oracle.hpp"

namespace sxai {

// Which top-k sets the metrics average over.
enum class KSetMode {
  kAllK,         // k = 1..n (AOPC style)
  kPercentBins,  // k = max(1, ceil(p*n/100)) for p in {10, 20, 50, 100}
};

std::string_view KSetModeName(KSetMode m);
std::vector<size_t> TopKSizes(size_t n, KSetMode mode);

// Segment indices by descending score; ties keep segment order.
std::vector<size_t> RankByScore(std::span<const double> scores);

// Mean over k of f(y|x) - f(y|x with the top-k segments zeroed).
double Comprehensiveness(const Oracle& oracle, const Utterance& utt, const TargetSpec& target,
                         std::span<const double> scores, KSetMode mode = KSetMode::kAllK);

// Mean over k of f(y|x) - f(y|x keeping only the top-k segments). Samples
// outside every segment are zeroed too.
double Sufficiency(const Oracle& oracle, const Utterance& utt, const TargetSpec& target,
                   std::span<const double> scores, KSetMode mode = KSetMode::kAllK);

// One score per segment.
using Explainer =
    std::function<std::vector<double>(const Oracle&, const Utterance&, const TargetSpec&)>;

Explainer LeaveOneOutExplainer();
// i.i.d. uniform [-1, 1) per (utterance, segment), keyed by seed and utterance id.
Explainer RandomExplainer(uint64_t seed);

struct ExplainerKind {
  std::string name;
  bool stochastic = false;
  std::function<Explainer(uint64_t seed)> make;
};

ExplainerKind LeaveOneOutKind();
ExplainerKind RandomKind();

struct EvaluateOptions {
  int rounds = 5;  // used only for stochastic explainers
  uint64_t seed = 0;
  KSetMode mode = KSetMode::kAllK;
  int jobs = 1;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;              // sample std over rounds, 0 for one round
  std::vector<double> rounds;   // dataset mean per round

  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

struct HeadFaithfulness {
  std::string head;
  MetricSummary comprehensiveness;
  MetricSummary sufficiency;

  friend bool operator==(const HeadFaithfulness&, const HeadFaithfulness&) = default;
};

struct UtteranceHeadMetrics {
  std::string head;
  std::string cls;
  double comprehensiveness = 0.0;  // mean over rounds
  double sufficiency = 0.0;

  friend bool operator==(const UtteranceHeadMetrics&, const UtteranceHeadMetrics&) = default;
};

struct UtteranceFaithfulness {
  std::string id;
  std::vector<UtteranceHeadMetrics> heads;

  friend bool operator==(const UtteranceFaithfulness&, const UtteranceFaithfulness&) = default;
};

struct FaithfulnessReport {
  std::string explainer;
  int rounds = 1;
  uint64_t seed = 0;
  KSetMode mode = KSetMode::kAllK;
  size_t n_utterances = 0;
  size_t n_skipped = 0;
  std::vector<std::string> skipped;
  std::vector<HeadFaithfulness> heads;
  std::vector<UtteranceFaithfulness> per_utterance;

  friend bool operator==(const FaithfulnessReport&, const FaithfulnessReport&) = default;
};

// Targets are the per-head predicted classes. Round r of a stochastic
// explainer uses seed DeriveSeed(options.seed, r). Utterances without
// segments are skipped and listed. Throws kInvalidArgument on an empty dataset.
FaithfulnessReport Evaluate(const Oracle& oracle, std::span<const Utterance> dataset,
                            const ExplainerKind& explainer, const EvaluateOptions& options);

}  // namespace sxai
