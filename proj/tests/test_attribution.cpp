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

#include <gtest/gtest.h>

#include <numeric>

#include "sxai/attribution.hpp"
#include "sxai/error.hpp"
#include "sxai/oracle.hpp"
#include "sxai/perturb.hpp"
#include "sxai/rng.hpp"
#include "test_util.hpp"

namespace sxai {
namespace {

using testing::Tone;

// Word 1 carries `hz` at amplitude 0.5, word 2 is silence; 0.25 s each.
Utterance ToneThenSilence(double hz) {
  std::vector<float> v(8000, 0.0f);
  const auto t = Tone(hz, 0.25, 16000, 0.5);
  for (size_t i = 0; i < t.size(); ++i) v[i] = t.samples()[i];
  return MakeUtterance("u", Waveform(v, 16000), {{"alpha", 0.0, 0.25}, {"pause", 0.25, 0.5}});
}

Utterance NoisyWords(size_t n, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<float> v(4000 * n);
  for (auto& x : v) x = static_cast<float>(0.3 * rng.NextSigned());
  std::vector<WordSegment> segs;
  for (size_t i = 0; i < n; ++i) segs.push_back({"w" + std::to_string(i), 0.25 * i, 0.25 * (i + 1)});
  return MakeUtterance("noisy", Waveform(v, 16000), segs);
}

ConstantOracle MakeConstant() {
  return ConstantOracle(HeadSchema(std::vector<HeadSpec>{{"a", {"x", "y"}}, {"b", {"p", "q", "r"}}}),
                        Prediction({{0.3, 0.7}, {0.1, 0.2, 0.7}}), 16000);
}

GridSet SmallGrids() {
  return ParseGridConfig(
      R"({"pitch": [-2, 2], "stretch": [0.8, 1.2], "reverb": [50], "noise_snr_db": [0, 10]})");
}

TEST(WordAttribution, ToneAndSilence) {
  const auto cfg = DefaultToneConfig(4);
  const ToneKeywordOracle o(cfg);
  const auto utt = ToneThenSilence(400.0);
  const auto wa = ComputeWordAttribution(o, utt, {"keyword", "alpha"});
  ASSERT_EQ(wa.scores.size(), 2u);

  std::vector<double> hz;
  for (const auto& [n, f] : cfg.class_hz) hz.push_back(f);
  const double p_x = testing::ReferenceToneProbs(utt.waveform, hz, cfg.temperature)[0];
  EXPECT_NEAR(wa.base_prob, p_x, 1e-9);
  EXPECT_NEAR(wa.scores[0].r, p_x - 0.25, 1e-9);
  EXPECT_EQ(wa.scores[1].r, 0.0);
  EXPECT_EQ(wa.scores[0].segment.text, "alpha");
}

TEST(WordAttribution, EqualsBruteForce) {
  const ToneKeywordOracle o(DefaultToneConfig(4));
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const auto utt = NoisyWords(4, seed);
    const TargetSpec t{"keyword", "charlie"};
    const auto wa = ComputeWordAttribution(o, utt, t);
    const auto rt = o.schema().Resolve(t);
    const double base = o.Predict(utt.waveform).Probability(rt);
    for (size_t i = 0; i < utt.segments.size(); ++i) {
      const auto masked = testing::ReferenceMask(utt.waveform.samples(), 16000,
                                                 utt.segments[i].start_s, utt.segments[i].end_s);
      const double p = o.Predict(Waveform(masked, 16000)).Probability(rt);
      EXPECT_EQ(wa.scores[i].r, base - p);
      EXPECT_GE(wa.scores[i].r, -1.0);
      EXPECT_LE(wa.scores[i].r, 1.0);
    }
  }
}

TEST(WordAttribution, MakesNPlusOneCallsInOneBatch) {
  const ToneKeywordOracle inner(DefaultToneConfig(4));
  const testing::CountingOracle o(inner);
  const auto utt = NoisyWords(6, 3);
  ComputeWordAttribution(o, utt, {"keyword", "alpha"});
  EXPECT_EQ(o.predictions(), 7u);
  EXPECT_EQ(o.calls(), 1u);
}

TEST(WordAttribution, Errors) {
  const ToneKeywordOracle o(DefaultToneConfig(4));
  auto utt = ToneThenSilence(400.0);
  EXPECT_THROW(ComputeWordAttribution(o, utt, {"keyword", "zulu"}), Error);
  EXPECT_THROW(ComputeWordAttribution(o, utt, {"nope", "alpha"}), Error);
  utt.segments.clear();
  EXPECT_THROW(ComputeWordAttribution(o, utt, {"keyword", "alpha"}), Error);
}

TEST(Paralinguistic, RelevanceIsMeanOfDeltas) {
  const ToneKeywordOracle o(DefaultToneConfig(4));
  const auto utt = NoisyWords(4, 9);
  const auto pa = ComputeParalinguisticAttribution(o, utt, {"keyword", "bravo"},
                                                   GridSet::Defaults(), 3);
  EXPECT_EQ(pa.directions.size(), 6u);
  for (const auto& [dir, rel] : pa.directions) {
    ASSERT_FALSE(rel.grid.empty());
    double sum = 0.0;
    for (const auto& g : rel.grid) {
      sum += g.delta;
      EXPECT_GE(g.delta, -1.0);
      EXPECT_LE(g.delta, 1.0);
    }
    EXPECT_NEAR(rel.relevance, sum / rel.grid.size(), 1e-12);
  }
  EXPECT_EQ(pa.directions.at(FeatureDirection::kStretchDown).grid.size(), 9u);
  EXPECT_EQ(pa.directions.at(FeatureDirection::kStretchUp).grid.size(), 6u);
}

TEST(Paralinguistic, DeltasMatchDirectPerturbation) {
  const AmplitudeOracle o(AmplitudeOracleConfig{});
  auto grids = SmallGrids();
  grids.noise_seed = 17;
  const auto utt = NoisyWords(3, 4);
  const TargetSpec t{"level", "medium"};
  const auto pa = ComputeParalinguisticAttribution(o, utt, t, grids);
  const auto rt = o.schema().Resolve(t);
  const double base = o.Predict(utt.waveform).Probability(rt);
  for (const auto& grid : grids.grids) {
    for (double p : grid.parameters) {
      const auto dir = DirectionOf(grid.feature, p);
      const auto& g = pa.directions.at(dir).grid;
      const auto it = std::find_if(g.begin(), g.end(),
                                   [&](const GridDelta& d) { return d.parameter == p; });
      ASSERT_NE(it, g.end());
      const auto x = ApplyPerturbation({grid.feature, p, 17}, utt.waveform);
      EXPECT_EQ(it->delta, base - o.Predict(x).Probability(rt));
    }
  }
}

TEST(Paralinguistic, AmplitudeOracleNoiseAtZeroDb) {
  const AmplitudeOracle o(AmplitudeOracleConfig{});
  auto grids = ParseGridConfig(R"({"noise_snr_db": [0]})");
  grids.noise_seed = 5;
  const auto utt = NoisyWords(2, 11);
  const TargetSpec t{"level", "loud"};
  const auto pa = ComputeParalinguisticAttribution(o, utt, t, grids);

  // Reference: level oracle evaluated by hand on x and on x + 0 dB noise.
  auto prob_loud = [](const Waveform& w) {
    double acc = 0.0;
    for (float v : w.samples()) acc += static_cast<double>(v) * v;
    const double l = std::max(-120.0, 10.0 * std::log10(acc / w.size()));
    const double e[3] = {std::exp(-std::abs(l + 36.0) / 4.0), std::exp(-std::abs(l + 24.0) / 4.0),
                         std::exp(-std::abs(l + 12.0) / 4.0)};
    return e[2] / (e[0] + e[1] + e[2]);
  };
  const double expected = prob_loud(utt.waveform) - prob_loud(AddWhiteNoise(utt.waveform, 0.0, 5));
  const auto& noise = pa.directions.at(FeatureDirection::kNoise);
  EXPECT_NEAR(noise.relevance, expected, 1e-9);
  EXPECT_GT(std::abs(noise.relevance), 1e-3);
}

TEST(Paralinguistic, ConstantOracleIsZero) {
  const auto o = MakeConstant();
  const auto utt = NoisyWords(3, 2);
  const auto report = Explain(o, utt, {}, SmallGrids());
  ASSERT_EQ(report.targets.size(), 2u);
  for (const auto& t : report.targets) {
    for (const auto& s : t.words.scores) EXPECT_EQ(s.r, 0.0);
    for (const auto& [dir, rel] : t.paralinguistic.directions) {
      EXPECT_EQ(rel.relevance, 0.0);
      for (const auto& g : rel.grid) EXPECT_EQ(g.delta, 0.0);
    }
  }
}

TEST(Explain, DefaultTargetsArePredicted) {
  const auto o = MakeConstant();
  const auto report = Explain(o, NoisyWords(2, 1), {}, SmallGrids());
  ASSERT_EQ(report.targets.size(), 2u);
  EXPECT_EQ(report.targets[0].words.target, (TargetSpec{"a", "y"}));
  EXPECT_EQ(report.targets[1].words.target, (TargetSpec{"b", "r"}));
  EXPECT_EQ(report.targets[1].paralinguistic.target, (TargetSpec{"b", "r"}));
  EXPECT_EQ(report.targets[0].words.base_prob, 0.7);
}

TEST(Explain, SingleHeadAndExplicitTargets) {
  const ToneKeywordOracle inner(DefaultToneConfig(4));
  const testing::CountingOracle o(inner);
  const auto utt = ToneThenSilence(600.0);
  const auto grids = SmallGrids();
  const auto report = Explain(o, utt, {}, grids);
  ASSERT_EQ(report.targets.size(), 1u);
  EXPECT_EQ(report.targets[0].words.target.cls, "bravo");
  EXPECT_EQ(report.targets[0].words.scores.size(), 2u);
  EXPECT_EQ(o.calls(), 2u);
  EXPECT_EQ(o.predictions(), 1u + 2u + 7u);

  const auto two = Explain(inner, utt, {{"keyword", "alpha"}, {"keyword", "bravo"}}, grids);
  ASSERT_EQ(two.targets.size(), 2u);
  EXPECT_EQ(two.targets[1], report.targets[0]);
  EXPECT_EQ(two.targets[1].words, ComputeWordAttribution(inner, utt, {"keyword", "bravo"}));
  EXPECT_EQ(two.targets[1].paralinguistic,
            ComputeParalinguisticAttribution(inner, utt, {"keyword", "bravo"}, grids));
}

TEST(Explain, DeterministicAcrossJobs) {
  const ToneKeywordOracle o(DefaultToneConfig(4));
  const auto utt = NoisyWords(5, 8);
  EXPECT_EQ(Explain(o, utt, {}, GridSet::Defaults(), 1), Explain(o, utt, {}, GridSet::Defaults(), 4));
}

}  // namespace
}  // namespace sxai
