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

#include "sxai/remote_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sxai/base64.hpp"
#include "sxai/error.hpp"

namespace sxai {

namespace {

using Json = nlohmann::ordered_json;

Json ParseBody(const std::string& body, const char* what) {
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    ThrowOracle(std::string("invalid ") + what + " payload: " + e.what());
  }
}

Json PredictItem(const Waveform& w) {
  std::vector<unsigned char> bytes;
  bytes.reserve(w.size() * 4);
  for (float s : w.samples()) {
    const auto bits = std::bit_cast<uint32_t>(s);
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
  Json item;
  item["sample_rate"] = w.sample_rate();
  item["samples_b64"] = Base64Encode(bytes);
  return item;
}

Prediction PredictionFromJson(const Json& doc, const HeadSchema& schema) {
  if (!doc.is_object() || !doc.contains("heads") || !doc["heads"].is_object()) {
    ThrowOracle("prediction payload lacks a \"heads\" object");
  }
  const auto& heads = doc["heads"];
  std::vector<std::vector<double>> probs;
  for (const auto& spec : schema.heads()) {
    if (!heads.contains(spec.name) || !heads[spec.name].is_object()) {
      ThrowOracle("prediction payload lacks head \"" + spec.name + "\"");
    }
    const auto& dist = heads[spec.name];
    if (dist.size() != spec.classes.size()) {
      ThrowOracle("head \"" + spec.name + "\" has the wrong number of classes");
    }
    std::vector<double> v;
    double sum = 0.0;
    for (const auto& cls : spec.classes) {
      if (!dist.contains(cls) || !dist[cls].is_number()) {
        ThrowOracle("head \"" + spec.name + "\" lacks class \"" + cls + "\"");
      }
      const double p = dist[cls].get<double>();
      if (!std::isfinite(p) || p < -kNormalizationTolerance || p > 1.0 + kNormalizationTolerance) {
        ThrowOracle("head \"" + spec.name + "\" has a probability outside [0, 1]");
      }
      v.push_back(std::clamp(p, 0.0, 1.0));
      sum += v.back();
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      ThrowOracle("head \"" + spec.name + "\" is non-normalized (sum " + std::to_string(sum) + ")");
    }
    for (auto& p : v) p /= sum;
    probs.push_back(std::move(v));
  }
  return Prediction(std::move(probs));
}

}  // namespace

struct RemoteOracle::Endpoint {
  std::string host;
  int port = 80;
  std::string prefix;
};

std::string EncodePredictItem(const Waveform& w) { return PredictItem(w).dump(); }

std::vector<float> DecodeSamplesB64(const std::string& b64) {
  const auto bytes = Base64Decode(b64);
  if (!bytes || bytes->size() % 4 != 0) ThrowFormat("malformed samples_b64");
  std::vector<float> out(bytes->size() / 4);
  for (size_t i = 0; i < out.size(); ++i) {
    uint32_t bits = 0;
    for (int k = 0; k < 4; ++k) bits |= static_cast<uint32_t>((*bytes)[4 * i + k]) << (8 * k);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

void ParseSchemaPayload(const std::string& body, HeadSchema& schema, int& sample_rate) {
  const Json doc = ParseBody(body, "schema");
  if (!doc.is_object() || !doc.contains("sample_rate") ||
      !doc["sample_rate"].is_number_integer() || !doc.contains("heads") ||
      !doc["heads"].is_object()) {
    ThrowOracle("schema payload needs integer \"sample_rate\" and object \"heads\"");
  }
  std::vector<HeadSpec> heads;
  for (const auto& [name, classes] : doc["heads"].items()) {
    if (!classes.is_array()) ThrowOracle("schema head \"" + name + "\" must list classes");
    HeadSpec h{name, {}};
    for (const auto& c : classes) {
      if (!c.is_string()) ThrowOracle("schema classes must be strings");
      h.classes.push_back(c.get<std::string>());
    }
    heads.push_back(std::move(h));
  }
  if (heads.empty()) ThrowOracle("schema declares no heads");
  try {
    schema = HeadSchema(std::move(heads));
  } catch (const Error& e) {
    ThrowOracle(std::string("invalid schema: ") + e.what());
  }
  sample_rate = doc["sample_rate"].get<int>();
  if (sample_rate <= 0) ThrowOracle("schema sample_rate must be positive");
}

Prediction ParsePredictionPayload(const std::string& body, const HeadSchema& schema) {
  return PredictionFromJson(ParseBody(body, "prediction"), schema);
}

RemoteOracle::RemoteOracle(const std::string& url, RemoteOptions options)
    : endpoint_(std::make_unique<Endpoint>()),
      options_(options),
      in_flight_(std::clamp(options.max_in_flight, 1, 256)) {
  if (options_.batch_size == 0) ThrowInvalid("batch size must be positive");
  options_.max_in_flight = std::clamp(options_.max_in_flight, 1, 256);

  std::string rest = url;
  const std::string scheme = "http://";
  if (rest.rfind("https://", 0) == 0) ThrowInvalid("https oracles are not supported: " + url);
  if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
  const auto slash = rest.find('/');
  std::string hostport = rest.substr(0, slash);
  if (slash != std::string::npos) endpoint_->prefix = rest.substr(slash);
  while (!endpoint_->prefix.empty() && endpoint_->prefix.back() == '/') {
    endpoint_->prefix.pop_back();
  }
  const auto colon = hostport.rfind(':');
  if (colon != std::string::npos) {
    try {
      endpoint_->port = std::stoi(hostport.substr(colon + 1));
    } catch (const std::exception&) {
      ThrowInvalid("invalid port in oracle URL: " + url);
    }
    hostport = hostport.substr(0, colon);
  }
  if (hostport.empty()) ThrowInvalid("oracle URL has no host: " + url);
  endpoint_->host = hostport;

  httplib::Client client(endpoint_->host, endpoint_->port);
  client.set_connection_timeout(options_.timeout_s);
  client.set_read_timeout(options_.timeout_s);
  auto res = client.Get(endpoint_->prefix + "/schema");
  if (!res) {
    ThrowOracle("cannot reach oracle at " + url + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    ThrowOracle("GET /schema returned HTTP " + std::to_string(res->status));
  }
  ParseSchemaPayload(res->body, schema_, sample_rate_);
}

RemoteOracle::~RemoteOracle() = default;

std::string RemoteOracle::Post(const std::string& path, const std::string& body) const {
  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<256>& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  httplib::Client client(endpoint_->host, endpoint_->port);
  client.set_connection_timeout(options_.timeout_s);
  client.set_read_timeout(options_.timeout_s);
  client.set_write_timeout(options_.timeout_s);
  auto res = client.Post(endpoint_->prefix + path, body, "application/json");
  if (!res) ThrowOracle("POST " + path + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    ThrowOracle("POST " + path + " returned HTTP " + std::to_string(res->status) + ": " +
                res->body.substr(0, 200));
  }
  return res->body;
}

Prediction RemoteOracle::DoPredict(const Waveform& w) const {
  return ParsePredictionPayload(Post("/predict", PredictItem(w).dump()), schema_);
}

std::vector<Prediction> RemoteOracle::DoPredictBatch(std::span<const Waveform> ws) const {
  const size_t chunks = (ws.size() + options_.batch_size - 1) / options_.batch_size;
  std::vector<std::vector<Prediction>> results(chunks);
  std::vector<std::exception_ptr> errors(chunks);

  auto run_chunk = [&](size_t c) {
    try {
      const size_t begin = c * options_.batch_size;
      const size_t end = std::min(ws.size(), begin + options_.batch_size);
      Json body;
      body["items"] = Json::array();
      for (size_t i = begin; i < end; ++i) body["items"].push_back(PredictItem(ws[i]));
      const Json doc = ParseBody(Post("/predict_batch", body.dump()), "batch");
      if (!doc.is_object() || !doc.contains("results") || !doc["results"].is_array() ||
          doc["results"].size() != end - begin) {
        ThrowOracle("batch payload must hold one result per item");
      }
      for (const auto& r : doc["results"]) results[c].push_back(PredictionFromJson(r, schema_));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  const size_t workers = std::min<size_t>(chunks, static_cast<size_t>(options_.max_in_flight));
  if (workers <= 1) {
    for (size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (size_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Prediction> out;
  out.reserve(ws.size());
  for (auto& chunk : results) {
    for (auto& p : chunk) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sxai
