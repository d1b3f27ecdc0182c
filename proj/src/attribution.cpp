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

#include "sxai/attribution.hpp"

#include <optional>

#include "sxai/error.hpp"
#include "sxai/parallel.hpp"

namespace sxai {

namespace {

struct GridPoint {
  FeatureDirection direction;
  double parameter;
};

// Perturbed copies of x for every grid point, generated in parallel.
void AppendPerturbations(const Waveform& x, const GridSet& grids, int jobs,
                         std::vector<GridPoint>& points, std::vector<Waveform>& out) {
  std::vector<PerturbationSpec> specs;
  for (const auto& grid : grids.grids) {
    if (grid.parameters.empty()) {
      ThrowInvalid("empty perturbation grid for " + std::string(FeatureName(grid.feature)));
    }
    for (double p : grid.parameters) {
      specs.push_back({grid.feature, p, grids.noise_seed});
      points.push_back({DirectionOf(grid.feature, p), p});
    }
  }
  if (specs.empty()) ThrowInvalid("no perturbation grids given");
  std::vector<std::optional<Waveform>> slots(specs.size());
  ParallelFor(specs.size(), jobs,
              [&](size_t i) { slots[i] = ApplyPerturbation(specs[i], x); });
  for (auto& s : slots) out.push_back(std::move(*s));
}

ParalinguisticAttribution CollectParalinguistic(const std::string& id, const TargetSpec& target,
                                                const ResolvedTarget& rt, double base,
                                                const std::vector<GridPoint>& points,
                                                std::span<const Prediction> preds) {
  ParalinguisticAttribution pa{id, target, base, {}};
  for (size_t i = 0; i < points.size(); ++i) {
    pa.directions[points[i].direction].grid.push_back(
        {points[i].parameter, base - preds[i].Probability(rt)});
  }
  for (auto& [dir, rel] : pa.directions) {
    double sum = 0.0;
    for (const auto& g : rel.grid) sum += g.delta;
    rel.relevance = sum / static_cast<double>(rel.grid.size());
  }
  return pa;
}

WordAttribution CollectWords(const Utterance& utt, const TargetSpec& target,
                             const ResolvedTarget& rt, double base,
                             std::span<const Prediction> masked) {
  WordAttribution wa{utt.id, target, base, {}};
  for (size_t i = 0; i < utt.segments.size(); ++i) {
    wa.scores.push_back({utt.segments[i], base - masked[i].Probability(rt)});
  }
  return wa;
}

}  // namespace

WordAttribution ComputeWordAttribution(const Oracle& oracle, const Utterance& utt,
                                       const TargetSpec& target) {
  if (utt.segments.empty()) ThrowInvalid("utterance \"" + utt.id + "\" has no segments");
  const ResolvedTarget rt = oracle.schema().Resolve(target);

  std::vector<Waveform> batch;
  batch.reserve(utt.segments.size() + 1);
  batch.push_back(utt.waveform);
  for (const auto& seg : utt.segments) batch.push_back(MaskSegment(utt.waveform, seg));
  const auto preds = oracle.PredictBatch(batch);
  return CollectWords(utt, target, rt, preds[0].Probability(rt),
                      std::span(preds).subspan(1));
}

ParalinguisticAttribution ComputeParalinguisticAttribution(const Oracle& oracle,
                                                           const Utterance& utt,
                                                           const TargetSpec& target,
                                                           const GridSet& grids, int jobs) {
  const ResolvedTarget rt = oracle.schema().Resolve(target);
  std::vector<GridPoint> points;
  std::vector<Waveform> batch{utt.waveform};
  AppendPerturbations(utt.waveform, grids, jobs, points, batch);
  const auto preds = oracle.PredictBatch(batch);
  return CollectParalinguistic(utt.id, target, rt, preds[0].Probability(rt), points,
                               std::span(preds).subspan(1));
}

AttributionReport Explain(const Oracle& oracle, const Utterance& utt,
                          std::vector<TargetSpec> targets, const GridSet& grids, int jobs) {
  if (utt.segments.empty()) ThrowInvalid("utterance \"" + utt.id + "\" has no segments");
  const Prediction base = oracle.Predict(utt.waveform);
  if (targets.empty()) targets = PredictedTargets(oracle.schema(), base);
  std::vector<ResolvedTarget> resolved;
  for (const auto& t : targets) resolved.push_back(oracle.schema().Resolve(t));

  const size_t n = utt.segments.size();
  std::vector<Waveform> batch;
  batch.reserve(n);
  for (const auto& seg : utt.segments) batch.push_back(MaskSegment(utt.waveform, seg));
  std::vector<GridPoint> points;
  AppendPerturbations(utt.waveform, grids, jobs, points, batch);
  const auto preds = oracle.PredictBatch(batch);
  const auto masked = std::span(preds).first(n);
  const auto perturbed = std::span(preds).subspan(n);

  AttributionReport report{utt.id, {}};
  for (size_t t = 0; t < targets.size(); ++t) {
    const double p0 = base.Probability(resolved[t]);
    report.targets.push_back(
        {CollectWords(utt, targets[t], resolved[t], p0, masked),
         CollectParalinguistic(utt.id, targets[t], resolved[t], p0, points, perturbed)});
  }
  return report;
}

}  // namespace sxai
