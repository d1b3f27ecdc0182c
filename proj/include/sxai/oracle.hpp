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
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sxai/audio.hpp"

namespace sxai {

// Probability vectors must sum to 1 within this tolerance.
inline constexpr double kNormalizationTolerance = 1e-4;

struct HeadSpec {
  std::string name;
  std::vector<std::string> classes;

  friend bool operator==(const HeadSpec&, const HeadSpec&) = default;
};

struct TargetSpec {
  std::string head;
  std::string cls;

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

struct ResolvedTarget {
  size_t head = 0;
  size_t cls = 0;
};

class HeadSchema {
 public:
  HeadSchema() = default;
  // Throws kInvalidArgument on duplicate heads/classes or empty class lists.
  explicit HeadSchema(std::vector<HeadSpec> heads);

  const std::vector<HeadSpec>& heads() const { return heads_; }
  size_t size() const { return heads_.size(); }

  // Throws kInvalidArgument when the head or class is unknown.
  ResolvedTarget Resolve(const TargetSpec& target) const;
  size_t HeadIndex(std::string_view head) const;

  friend bool operator==(const HeadSchema&, const HeadSchema&) = default;

 private:
  std::vector<HeadSpec> heads_;
};

// Per-head probability vectors, in schema order.
class Prediction {
 public:
  // Validates entries in [0, 1] and sums within kNormalizationTolerance.
  explicit Prediction(std::vector<std::vector<double>> probs);

  const std::vector<std::vector<double>>& heads() const { return probs_; }
  double Probability(const ResolvedTarget& t) const { return probs_[t.head][t.cls]; }
  // Lowest class index wins ties.
  size_t ArgMax(size_t head) const;

  friend bool operator==(const Prediction&, const Prediction&) = default;

 private:
  std::vector<std::vector<double>> probs_;
};

// Per-head argmax targets, ties broken by schema class order.
std::vector<TargetSpec> PredictedTargets(const HeadSchema& schema, const Prediction& p);

// The classifier under explanation. Callers go through Predict/PredictBatch,
// which enforce the declared sample rate and the schema shape.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual const HeadSchema& schema() const = 0;
  virtual int sample_rate() const = 0;

  Prediction Predict(const Waveform& w) const;
  // Order preserved; any failure aborts the whole batch.
  std::vector<Prediction> PredictBatch(std::span<const Waveform> ws) const;

 protected:
  virtual Prediction DoPredict(const Waveform& w) const = 0;
  virtual std::vector<Prediction> DoPredictBatch(std::span<const Waveform> ws) const;

 private:
  void CheckInput(const Waveform& w) const;
  void CheckOutput(const Prediction& p) const;
};

class ConstantOracle final : public Oracle {
 public:
  ConstantOracle(HeadSchema schema, Prediction fixed, int sample_rate);

  const HeadSchema& schema() const override { return schema_; }
  int sample_rate() const override { return sample_rate_; }

 protected:
  Prediction DoPredict(const Waveform&) const override { return fixed_; }

 private:
  HeadSchema schema_;
  Prediction fixed_;
  int sample_rate_;
};

struct ToneOracleConfig {
  std::string head = "keyword";
  std::vector<std::pair<std::string, double>> class_hz;
  double temperature = 1e-3;
  int sample_rate = 16000;
};

// Single head. Class energy is the squared amplitude estimate (2|X(f)|/N)^2 of
// the whole signal at the class frequency (Goertzel); probabilities are
// softmax(energy / temperature).
class ToneKeywordOracle final : public Oracle {
 public:
  explicit ToneKeywordOracle(ToneOracleConfig config);

  const HeadSchema& schema() const override { return schema_; }
  int sample_rate() const override { return config_.sample_rate; }
  const ToneOracleConfig& config() const { return config_; }

  std::vector<double> Energies(const Waveform& w) const;

 protected:
  Prediction DoPredict(const Waveform& w) const override;

 private:
  ToneOracleConfig config_;
  HeadSchema schema_;
};

struct AmplitudeOracleConfig {
  std::string head = "level";
  // Class name and the RMS level (dBFS) at the center of its band.
  std::vector<std::pair<std::string, double>> class_center_db = {
      {"quiet", -36.0}, {"medium", -24.0}, {"loud", -12.0}};
  double temperature_db = 4.0;
  int sample_rate = 16000;
};

// Single head reacting to overall level: softmax(-|L - center_k| / T), with L
// the RMS level in dBFS floored at -120 dB.
class AmplitudeOracle final : public Oracle {
 public:
  explicit AmplitudeOracle(AmplitudeOracleConfig config);

  const HeadSchema& schema() const override { return schema_; }
  int sample_rate() const override { return config_.sample_rate; }

  static double LevelDb(const Waveform& w);

 protected:
  Prediction DoPredict(const Waveform& w) const override;

 private:
  AmplitudeOracleConfig config_;
  HeadSchema schema_;
};

// Class frequencies 400 + 200*k Hz; names alpha, bravo, ... (up to 8).
ToneOracleConfig DefaultToneConfig(size_t num_classes = 4);

// Toy oracle config files: {"type": "tone"|"amplitude"|"constant", ...}.
std::unique_ptr<Oracle> LoadOracleConfig(const std::filesystem::path& path);
std::string ToneConfigToJson(const ToneOracleConfig& config);

// "toy:tone[:cfg]", "toy:amplitude[:cfg]", "toy:constant[:cfg]",
// "remote:URL", or "remote" (URL from SXAI_ORACLE_URL).
std::unique_ptr<Oracle> CreateOracle(std::string_view spec);

}  // namespace sxai
