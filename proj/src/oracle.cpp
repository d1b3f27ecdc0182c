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

#include "sxai/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sxai/error.hpp"
#include "sxai/remote_oracle.hpp"

namespace sxai {

namespace {

constexpr const char* kClassNames[] = {"alpha", "bravo",   "charlie", "delta",
                                       "echo",  "foxtrot", "golf",    "hotel"};

std::vector<double> Softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - top);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) ThrowIo("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HeadSchema SingleHead(const std::string& head, const std::vector<std::string>& classes) {
  return HeadSchema({HeadSpec{head, classes}});
}

}  // namespace

HeadSchema::HeadSchema(std::vector<HeadSpec> heads) : heads_(std::move(heads)) {
  std::set<std::string> names;
  for (const auto& h : heads_) {
    if (!names.insert(h.name).second) ThrowInvalid("duplicate head \"" + h.name + "\"");
    if (h.classes.empty()) ThrowInvalid("head \"" + h.name + "\" has no classes");
    std::set<std::string> classes(h.classes.begin(), h.classes.end());
    if (classes.size() != h.classes.size()) {
      ThrowInvalid("head \"" + h.name + "\" has duplicate classes");
    }
  }
}

size_t HeadSchema::HeadIndex(std::string_view head) const {
  for (size_t i = 0; i < heads_.size(); ++i) {
    if (heads_[i].name == head) return i;
  }
  ThrowInvalid("unknown head \"" + std::string(head) + "\"");
}

ResolvedTarget HeadSchema::Resolve(const TargetSpec& target) const {
  const size_t h = HeadIndex(target.head);
  const auto& classes = heads_[h].classes;
  const auto it = std::find(classes.begin(), classes.end(), target.cls);
  if (it == classes.end()) {
    ThrowInvalid("unknown class \"" + target.cls + "\" for head \"" + target.head + "\"");
  }
  return {h, static_cast<size_t>(it - classes.begin())};
}

Prediction::Prediction(std::vector<std::vector<double>> probs) : probs_(std::move(probs)) {
  for (const auto& head : probs_) {
    if (head.empty()) ThrowInvalid("empty probability vector");
    double sum = 0.0;
    for (double p : head) {
      if (!(p >= 0.0 && p <= 1.0)) ThrowInvalid("probability outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      ThrowInvalid("probability vector is not normalized (sum " + std::to_string(sum) + ")");
    }
  }
}

size_t Prediction::ArgMax(size_t head) const {
  const auto& v = probs_.at(head);
  return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::vector<TargetSpec> PredictedTargets(const HeadSchema& schema, const Prediction& p) {
  std::vector<TargetSpec> out;
  for (size_t h = 0; h < schema.size(); ++h) {
    out.push_back({schema.heads()[h].name, schema.heads()[h].classes[p.ArgMax(h)]});
  }
  return out;
}

void Oracle::CheckInput(const Waveform& w) const {
  if (w.sample_rate() != sample_rate()) {
    ThrowInvalid("sample rate mismatch: oracle expects " + std::to_string(sample_rate()) +
                 " Hz, got " + std::to_string(w.sample_rate()) + " Hz");
  }
}

void Oracle::CheckOutput(const Prediction& p) const {
  const auto& heads = schema().heads();
  if (p.heads().size() != heads.size()) ThrowOracle("prediction head count mismatch");
  for (size_t h = 0; h < heads.size(); ++h) {
    if (p.heads()[h].size() != heads[h].classes.size()) {
      ThrowOracle("prediction class count mismatch for head \"" + heads[h].name + "\"");
    }
  }
}

Prediction Oracle::Predict(const Waveform& w) const {
  CheckInput(w);
  Prediction p = DoPredict(w);
  CheckOutput(p);
  return p;
}

std::vector<Prediction> Oracle::PredictBatch(std::span<const Waveform> ws) const {
  for (const auto& w : ws) CheckInput(w);
  if (ws.empty()) return {};
  auto out = DoPredictBatch(ws);
  if (out.size() != ws.size()) ThrowOracle("batch result count mismatch");
  for (const auto& p : out) CheckOutput(p);
  return out;
}

std::vector<Prediction> Oracle::DoPredictBatch(std::span<const Waveform> ws) const {
  std::vector<Prediction> out;
  out.reserve(ws.size());
  for (const auto& w : ws) out.push_back(DoPredict(w));
  return out;
}

ConstantOracle::ConstantOracle(HeadSchema schema, Prediction fixed, int sample_rate)
    : schema_(std::move(schema)), fixed_(std::move(fixed)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) ThrowInvalid("sample rate must be positive");
  if (fixed_.heads().size() != schema_.size()) ThrowInvalid("constant prediction shape mismatch");
  for (size_t h = 0; h < schema_.size(); ++h) {
    if (fixed_.heads()[h].size() != schema_.heads()[h].classes.size()) {
      ThrowInvalid("constant prediction shape mismatch");
    }
  }
}

ToneKeywordOracle::ToneKeywordOracle(ToneOracleConfig config) : config_(std::move(config)) {
  if (config_.class_hz.empty()) ThrowInvalid("tone oracle needs at least one class");
  if (!(config_.temperature > 0.0)) ThrowInvalid("temperature must be positive");
  if (config_.sample_rate <= 0) ThrowInvalid("sample rate must be positive");
  std::set<double> freqs;
  std::vector<std::string> names;
  for (const auto& [name, hz] : config_.class_hz) {
    if (!(hz > 0.0) || hz >= config_.sample_rate / 2.0) {
      ThrowInvalid("class frequency must lie in (0, Nyquist)");
    }
    if (!freqs.insert(hz).second) ThrowInvalid("duplicate class frequency");
    names.push_back(name);
  }
  schema_ = SingleHead(config_.head, names);
}

std::vector<double> ToneKeywordOracle::Energies(const Waveform& w) const {
  const auto x = w.samples();
  const double n = static_cast<double>(x.size());
  std::vector<double> energies;
  energies.reserve(config_.class_hz.size());
  for (const auto& [name, hz] : config_.class_hz) {
    const double omega = 2.0 * std::numbers::pi * hz / w.sample_rate();
    const double coeff = 2.0 * std::cos(omega);
    double s1 = 0.0, s2 = 0.0;
    for (float v : x) {
      const double s = v + coeff * s1 - s2;
      s2 = s1;
      s1 = s;
    }
    const double power = std::max(0.0, s1 * s1 + s2 * s2 - coeff * s1 * s2);
    const double amplitude = 2.0 * std::sqrt(power) / n;
    energies.push_back(amplitude * amplitude);
  }
  return energies;
}

Prediction ToneKeywordOracle::DoPredict(const Waveform& w) const {
  auto logits = Energies(w);
  for (auto& e : logits) e /= config_.temperature;
  return Prediction({Softmax(logits)});
}

AmplitudeOracle::AmplitudeOracle(AmplitudeOracleConfig config) : config_(std::move(config)) {
  if (config_.class_center_db.empty()) ThrowInvalid("amplitude oracle needs classes");
  if (!(config_.temperature_db > 0.0)) ThrowInvalid("temperature must be positive");
  if (config_.sample_rate <= 0) ThrowInvalid("sample rate must be positive");
  std::vector<std::string> names;
  for (const auto& c : config_.class_center_db) names.push_back(c.first);
  schema_ = SingleHead(config_.head, names);
}

double AmplitudeOracle::LevelDb(const Waveform& w) {
  double acc = 0.0;
  for (float v : w.samples()) acc += static_cast<double>(v) * v;
  const double rms = std::sqrt(acc / static_cast<double>(w.size()));
  return rms > 0.0 ? std::max(-120.0, 20.0 * std::log10(rms)) : -120.0;
}

Prediction AmplitudeOracle::DoPredict(const Waveform& w) const {
  const double level = LevelDb(w);
  std::vector<double> logits;
  for (const auto& [name, center] : config_.class_center_db) {
    logits.push_back(-std::abs(level - center) / config_.temperature_db);
  }
  return Prediction({Softmax(logits)});
}

ToneOracleConfig DefaultToneConfig(size_t num_classes) {
  if (num_classes < 2 || num_classes > std::size(kClassNames)) {
    ThrowInvalid("toy class count must be within [2, 8]");
  }
  ToneOracleConfig c;
  for (size_t k = 0; k < num_classes; ++k) {
    c.class_hz.emplace_back(kClassNames[k], 400.0 + 200.0 * static_cast<double>(k));
  }
  return c;
}

std::string ToneConfigToJson(const ToneOracleConfig& config) {
  nlohmann::ordered_json j;
  j["type"] = "tone";
  j["sample_rate"] = config.sample_rate;
  j["head"] = config.head;
  j["temperature"] = config.temperature;
  j["classes"] = nlohmann::ordered_json::array();
  for (const auto& [name, hz] : config.class_hz) {
    j["classes"].push_back({{"name", name}, {"hz", hz}});
  }
  return j.dump(2) + "\n";
}

std::unique_ptr<Oracle> LoadOracleConfig(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadText(path));
  } catch (const nlohmann::json::exception& e) {
    ThrowFormat(path.string() + ": malformed oracle config: " + e.what());
  }
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "tone") {
      ToneOracleConfig c;
      c.sample_rate = j.value("sample_rate", c.sample_rate);
      c.head = j.value("head", c.head);
      c.temperature = j.value("temperature", c.temperature);
      for (const auto& cls : j.at("classes")) {
        c.class_hz.emplace_back(cls.at("name").get<std::string>(), cls.at("hz").get<double>());
      }
      return std::make_unique<ToneKeywordOracle>(std::move(c));
    }
    if (type == "amplitude") {
      AmplitudeOracleConfig c;
      c.sample_rate = j.value("sample_rate", c.sample_rate);
      c.head = j.value("head", c.head);
      c.temperature_db = j.value("temperature_db", c.temperature_db);
      if (j.contains("classes")) {
        c.class_center_db.clear();
        for (const auto& cls : j.at("classes")) {
          c.class_center_db.emplace_back(cls.at("name").get<std::string>(),
                                         cls.at("center_db").get<double>());
        }
      }
      return std::make_unique<AmplitudeOracle>(std::move(c));
    }
    if (type == "constant") {
      std::vector<HeadSpec> heads;
      std::vector<std::vector<double>> probs;
      for (const auto& h : j.at("heads")) {
        heads.push_back({h.at("name").get<std::string>(),
                         h.at("classes").get<std::vector<std::string>>()});
        probs.push_back(h.at("probs").get<std::vector<double>>());
      }
      return std::make_unique<ConstantOracle>(HeadSchema(std::move(heads)),
                                              Prediction(std::move(probs)),
                                              j.value("sample_rate", 16000));
    }
    ThrowFormat("unknown oracle type \"" + type + "\"");
  } catch (const nlohmann::json::exception& e) {
    ThrowFormat(path.string() + ": invalid oracle config: " + e.what());
  }
}

std::unique_ptr<Oracle> CreateOracle(std::string_view spec) {
  auto with_config = [&](std::string_view prefix) -> std::optional<std::string> {
    if (spec == prefix) return std::string();
    if (spec.size() > prefix.size() + 1 && spec.substr(0, prefix.size()) == prefix &&
        spec[prefix.size()] == ':') {
      return std::string(spec.substr(prefix.size() + 1));
    }
    return std::nullopt;
  };

  if (auto cfg = with_config("toy:tone")) {
    if (cfg->empty()) return std::make_unique<ToneKeywordOracle>(DefaultToneConfig());
    return LoadOracleConfig(*cfg);
  }
  if (auto cfg = with_config("toy:amplitude")) {
    if (cfg->empty()) return std::make_unique<AmplitudeOracle>(AmplitudeOracleConfig{});
    return LoadOracleConfig(*cfg);
  }
  if (auto cfg = with_config("toy:constant")) {
    if (!cfg->empty()) return LoadOracleConfig(*cfg);
    const auto tone = DefaultToneConfig();
    std::vector<std::string> names;
    for (const auto& c : tone.class_hz) names.push_back(c.first);
    std::vector<double> uniform(names.size(), 1.0 / static_cast<double>(names.size()));
    return std::make_unique<ConstantOracle>(SingleHead(tone.head, names),
                                            Prediction({uniform}), tone.sample_rate);
  }
  if (auto url = with_config("remote")) {
    std::string target = *url;
    if (target.empty()) {
      const char* env = std::getenv("SXAI_ORACLE_URL");
      if (env == nullptr || *env == '\0') {
        ThrowInvalid("remote oracle needs a URL (remote:URL or SXAI_ORACLE_URL)");
      }
      target = env;
    }
    return std::make_unique<RemoteOracle>(target);
  }
  ThrowInvalid("unknown oracle \"" + std::string(spec) +
               "\" (expected toy:tone, toy:amplitude, toy:constant or remote:URL)");
}

}  // namespace sxai
