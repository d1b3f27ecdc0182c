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

#include "sxai/faithfulness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sxai/attribution.hpp"
#include "sxai/error.hpp"
#include "sxai/parallel.hpp"
#include "sxai/perturb.hpp"
#include "sxai/rng.hpp"

namespace sxai {

namespace {

constexpr int kPercentBins[] = {10, 20, 50, 100};

void CheckScores(const Utterance& utt, std::span<const double> scores) {
  if (utt.segments.empty()) ThrowInvalid("utterance \"" + utt.id + "\" has no segments");
  if (scores.size() != utt.segments.size()) {
    ThrowInvalid("explainer returned " + std::to_string(scores.size()) + " scores for " +
                 std::to_string(utt.segments.size()) + " segments");
  }
}

std::vector<WordSegment> TopSegments(const Utterance& utt, const std::vector<size_t>& order,
                                     size_t k) {
  std::vector<WordSegment> segs;
  for (size_t i = 0; i < k; ++i) segs.push_back(utt.segments[order[i]]);
  return segs;
}

struct MetricPair {
  double comprehensiveness = 0.0;
  double sufficiency = 0.0;
};

// Evaluates both metrics from one batch: [x?, removed_1.., kept_1..].
MetricPair ComputeMetrics(const Oracle& oracle, const Utterance& utt, const ResolvedTarget& rt,
                          const double* base_prob, std::span<const double> scores,
                          KSetMode mode, bool want_comp, bool want_suff) {
  CheckScores(utt, scores);
  const auto order = RankByScore(scores);
  const auto sizes = TopKSizes(utt.segments.size(), mode);

  std::vector<Waveform> batch;
  if (base_prob == nullptr) batch.push_back(utt.waveform);
  for (size_t k : sizes) {
    const auto top = TopSegments(utt, order, k);
    if (want_comp) batch.push_back(MaskSegments(utt.waveform, top));
    if (want_suff) batch.push_back(KeepOnlySegments(utt.waveform, top));
  }
  const auto preds = oracle.PredictBatch(batch);
  size_t at = 0;
  const double base = base_prob != nullptr ? *base_prob : preds[at++].Probability(rt);

  double comp = 0.0, suff = 0.0;
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (want_comp) comp += base - preds[at++].Probability(rt);
    if (want_suff) suff += base - preds[at++].Probability(rt);
  }
  const double n = static_cast<double>(sizes.size());
  return {comp / n, suff / n};
}

MetricSummary Summarize(std::vector<double> per_round) {
  MetricSummary s;
  s.rounds = std::move(per_round);
  const double n = static_cast<double>(s.rounds.size());
  s.mean = std::accumulate(s.rounds.begin(), s.rounds.end(), 0.0) / n;
  if (s.rounds.size() > 1) {
    double ss = 0.0;
    for (double v : s.rounds) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

}  // namespace

std::string_view KSetModeName(KSetMode m) {
  return m == KSetMode::kAllK ? "all_k" : "percent_bins";
}

std::vector<size_t> TopKSizes(size_t n, KSetMode mode) {
  std::vector<size_t> sizes;
  if (mode == KSetMode::kAllK) {
    for (size_t k = 1; k <= n; ++k) sizes.push_back(k);
  } else {
    for (int p : kPercentBins) {
      const auto k = static_cast<size_t>((static_cast<size_t>(p) * n + 99) / 100);
      sizes.push_back(std::max<size_t>(1, k));
    }
  }
  return sizes;
}

std::vector<size_t> RankByScore(std::span<const double> scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  return order;
}

double Comprehensiveness(const Oracle& oracle, const Utterance& utt, const TargetSpec& target,
                         std::span<const double> scores, KSetMode mode) {
  const auto rt = oracle.schema().Resolve(target);
  return ComputeMetrics(oracle, utt, rt, nullptr, scores, mode, true, false).comprehensiveness;
}

double Sufficiency(const Oracle& oracle, const Utterance& utt, const TargetSpec& target,
                   std::span<const double> scores, KSetMode mode) {
  const auto rt = oracle.schema().Resolve(target);
  return ComputeMetrics(oracle, utt, rt, nullptr, scores, mode, false, true).sufficiency;
}

Explainer LeaveOneOutExplainer() {
  return [](const Oracle& oracle, const Utterance& utt, const TargetSpec& target) {
    const auto wa = ComputeWordAttribution(oracle, utt, target);
    std::vector<double> scores;
    for (const auto& s : wa.scores) scores.push_back(s.r);
    return scores;
  };
}

Explainer RandomExplainer(uint64_t seed) {
  return [seed](const Oracle&, const Utterance& utt, const TargetSpec&) {
    SplitMix64 rng(DeriveSeed(seed, HashString(utt.id)));
    std::vector<double> scores(utt.segments.size());
    for (auto& s : scores) s = rng.NextSigned();
    return scores;
  };
}

ExplainerKind LeaveOneOutKind() {
  return {"l1o", false, [](uint64_t) { return LeaveOneOutExplainer(); }};
}

ExplainerKind RandomKind() {
  return {"random", true, [](uint64_t seed) { return RandomExplainer(seed); }};
}

FaithfulnessReport Evaluate(const Oracle& oracle, std::span<const Utterance> dataset,
                            const ExplainerKind& explainer, const EvaluateOptions& options) {
  if (dataset.empty()) ThrowInvalid("cannot evaluate an empty dataset");
  if (options.rounds < 1) ThrowInvalid("rounds must be at least 1");
  const int rounds = explainer.stochastic ? options.rounds : 1;
  const auto n_rounds = static_cast<size_t>(rounds);
  const auto& schema = oracle.schema();
  const size_t heads = schema.size();

  std::vector<Explainer> per_round;
  for (size_t r = 0; r < n_rounds; ++r) {
    per_round.push_back(
        explainer.make(explainer.stochastic ? DeriveSeed(options.seed, r) : options.seed));
  }

  struct UttResult {
    bool skipped = false;
    std::vector<TargetSpec> targets;
    // [round][head]
    std::vector<std::vector<MetricPair>> metrics;
  };
  std::vector<UttResult> results(dataset.size());

  ParallelFor(dataset.size(), options.jobs, [&](size_t u) {
    const Utterance& utt = dataset[u];
    UttResult& res = results[u];
    if (utt.segments.empty()) {
      res.skipped = true;
      return;
    }
    const Prediction base = oracle.Predict(utt.waveform);
    res.targets = PredictedTargets(schema, base);
    res.metrics.assign(n_rounds, std::vector<MetricPair>(heads));
    for (size_t r = 0; r < n_rounds; ++r) {
      for (size_t h = 0; h < heads; ++h) {
        const auto rt = schema.Resolve(res.targets[h]);
        const double p0 = base.Probability(rt);
        const auto scores = per_round[r](oracle, utt, res.targets[h]);
        res.metrics[r][h] =
            ComputeMetrics(oracle, utt, rt, &p0, scores, options.mode, true, true);
      }
    }
  });

  FaithfulnessReport report;
  report.explainer = explainer.name;
  report.rounds = rounds;
  report.seed = options.seed;
  report.mode = options.mode;
  for (size_t u = 0; u < dataset.size(); ++u) {
    if (results[u].skipped) {
      report.skipped.push_back(dataset[u].id);
      continue;
    }
    ++report.n_utterances;
    UtteranceFaithfulness uf{dataset[u].id, {}};
    for (size_t h = 0; h < heads; ++h) {
      double c = 0.0, s = 0.0;
      for (const auto& round : results[u].metrics) {
        c += round[h].comprehensiveness;
        s += round[h].sufficiency;
      }
      uf.heads.push_back({schema.heads()[h].name, results[u].targets[h].cls, c / rounds,
                          s / rounds});
    }
    report.per_utterance.push_back(std::move(uf));
  }
  report.n_skipped = report.skipped.size();
  if (report.n_utterances == 0) ThrowInvalid("every utterance in the dataset lacks segments");

  for (size_t h = 0; h < heads; ++h) {
    std::vector<double> comp(n_rounds, 0.0), suff(n_rounds, 0.0);
    for (size_t r = 0; r < n_rounds; ++r) {
      for (const auto& res : results) {
        if (res.skipped) continue;
        comp[r] += res.metrics[r][h].comprehensiveness;
        suff[r] += res.metrics[r][h].sufficiency;
      }
      comp[r] /= static_cast<double>(report.n_utterances);
      suff[r] /= static_cast<double>(report.n_utterances);
    }
    report.heads.push_back({schema.heads()[h].name, Summarize(comp), Summarize(suff)});
  }
  return report;
}

}  // namespace sxai
