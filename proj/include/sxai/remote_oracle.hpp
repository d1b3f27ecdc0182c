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

#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "sxai/oracle.hpp"

namespace sxai {

struct RemoteOptions {
  // Upper bound on concurrent HTTP requests issued by one client.
  int max_in_flight = 4;
  // Waveforms per /predict_batch request.
  size_t batch_size = 16;
  int timeout_s = 60;
};

// Client for a model server speaking the oracle wire protocol:
//   GET  /schema         -> {"sample_rate": int, "heads": {head: [class...]}}
//   POST /predict        {"sample_rate", "samples_b64"} -> {"heads": {head: {class: p}}}
//   POST /predict_batch  {"items": [...]} -> {"results": [...]}
// The schema handshake happens in the constructor; transport failures throw
// kOracle.
class RemoteOracle final : public Oracle {
 public:
  explicit RemoteOracle(const std::string& url, RemoteOptions options = {});
  ~RemoteOracle() override;

  const HeadSchema& schema() const override { return schema_; }
  int sample_rate() const override { return sample_rate_; }

 protected:
  Prediction DoPredict(const Waveform& w) const override;
  std::vector<Prediction> DoPredictBatch(std::span<const Waveform> ws) const override;

 private:
  struct Endpoint;
  std::string Post(const std::string& path, const std::string& body) const;

  std::unique_ptr<Endpoint> endpoint_;
  RemoteOptions options_;
  HeadSchema schema_;
  int sample_rate_ = 0;
  mutable std::counting_semaphore<256> in_flight_;
};

// Wire helpers, exposed for servers and tests.
std::string EncodePredictItem(const Waveform& w);
std::vector<float> DecodeSamplesB64(const std::string& b64);
void ParseSchemaPayload(const std::string& body, HeadSchema& schema, int& sample_rate);
// Validates one {"heads": {...}} object against the schema. Vectors within
// kNormalizationTolerance of 1 are re-normalized; others are rejected.
Prediction ParsePredictionPayload(const std::string& body, const HeadSchema& schema);

}  // namespace sxai
