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
#include <sxai/sxai.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Take(char* s) {
  std::string out = s ? s : "";
  sxai_string_free(s);
  return out;
}

std::vector<float> ToneSamples(double hz, size_t n, double amp) {
  std::vector<float> v(n);
  for (size_t i = 0; i < n; ++i) {
    v[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * i / 16000.0));
  }
  return v;
}

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sxai_capi_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CApi, VersionAndErrors) {
  EXPECT_STREQ(sxai_version(), "0.1.0");
  sxai_waveform* w = nullptr;
  EXPECT_EQ(sxai_waveform_load("/nonexistent/x.wav", &w), SXAI_ERR_IO);
  EXPECT_EQ(w, nullptr);
  EXPECT_NE(std::string(sxai_last_error()), "");
  EXPECT_EQ(sxai_waveform_from_samples(nullptr, 0, 16000, &w), SXAI_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sxai_waveform_load(nullptr, &w), SXAI_ERR_INVALID_ARGUMENT);
  sxai_oracle* o = nullptr;
  EXPECT_EQ(sxai_oracle_create("remote:http://127.0.0.1:1", &o), SXAI_ERR_ORACLE);
  EXPECT_EQ(sxai_oracle_create("toy:what", &o), SXAI_ERR_INVALID_ARGUMENT);
  char* out = nullptr;
  EXPECT_EQ(sxai_render_report("{", "html", &out), SXAI_ERR_FORMAT);
  EXPECT_STREQ(sxai_status_name(SXAI_ERR_ORACLE), "oracle error");
  sxai_waveform_free(nullptr);
  sxai_string_free(nullptr);
}

TEST_F(CApi, WaveformRoundTripAndPerturb) {
  const auto samples = ToneSamples(440.0, 8000, 0.5);
  sxai_waveform* w = nullptr;
  ASSERT_EQ(sxai_waveform_from_samples(samples.data(), samples.size(), 16000, &w), SXAI_OK);
  EXPECT_EQ(sxai_waveform_length(w), 8000u);
  EXPECT_EQ(sxai_waveform_sample_rate(w), 16000);
  const auto path = (dir_ / "t.wav").string();
  ASSERT_EQ(sxai_waveform_save(w, path.c_str()), SXAI_OK);
  sxai_waveform* back = nullptr;
  ASSERT_EQ(sxai_waveform_load(path.c_str(), &back), SXAI_OK);
  ASSERT_EQ(sxai_waveform_length(back), 8000u);
  EXPECT_TRUE(std::equal(samples.begin(), samples.end(), sxai_waveform_samples(back)));

  sxai_waveform* stretched = nullptr;
  ASSERT_EQ(sxai_perturb(w, "stretch", 0.5, 0, &stretched), SXAI_OK);
  EXPECT_NEAR(static_cast<double>(sxai_waveform_length(stretched)), 16000.0, 160.0);
  sxai_waveform* same = nullptr;
  ASSERT_EQ(sxai_perturb(w, "pitch", 0.0, 0, &same), SXAI_OK);
  EXPECT_TRUE(std::equal(samples.begin(), samples.end(), sxai_waveform_samples(same)));
  sxai_waveform* bad = nullptr;
  EXPECT_EQ(sxai_perturb(w, "reverb", 500.0, 0, &bad), SXAI_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sxai_perturb(w, "chorus", 1.0, 0, &bad), SXAI_ERR_INVALID_ARGUMENT);

  sxai_waveform* masked = nullptr;
  ASSERT_EQ(sxai_mask_segment(w, 0.25, 0.5, &masked), SXAI_OK);
  EXPECT_EQ(sxai_waveform_samples(masked)[4000], 0.0f);
  EXPECT_EQ(sxai_waveform_samples(masked)[3999], samples[3999]);

  for (auto* h : {w, back, stretched, same, masked}) sxai_waveform_free(h);
}

TEST_F(CApi, ExplainAndRender) {
  std::vector<float> v(8000, 0.0f);
  const auto tone = ToneSamples(400.0, 4000, 0.5);
  std::copy(tone.begin(), tone.end(), v.begin());
  sxai_waveform* w = nullptr;
  ASSERT_EQ(sxai_waveform_from_samples(v.data(), v.size(), 16000, &w), SXAI_OK);
  const char* words[] = {"alpha", "pause"};
  sxai_utterance* u = nullptr;
  ASSERT_EQ(sxai_utterance_create("c", w, nullptr, words, 2, &u), SXAI_OK);
  EXPECT_EQ(sxai_utterance_segment_count(u), 2u);
  sxai_oracle* o = nullptr;
  ASSERT_EQ(sxai_oracle_create("toy:tone", &o), SXAI_OK);

  char* schema = nullptr;
  ASSERT_EQ(sxai_oracle_schema_json(o, &schema), SXAI_OK);
  EXPECT_EQ(json::parse(Take(schema))["heads"][0]["name"], "keyword");
  char* pred = nullptr;
  ASSERT_EQ(sxai_oracle_predict_json(o, w, &pred), SXAI_OK);
  EXPECT_GT(json::parse(Take(pred))["keyword"]["alpha"].get<double>(), 0.9);

  const auto grids_path = dir_ / "g.json";
  std::ofstream(grids_path) << R"({"pitch": [2], "stretch": [0.9], "reverb": [40], "noise_snr_db": [10]})";
  sxai_grids* g = nullptr;
  ASSERT_EQ(sxai_grids_load(grids_path.string().c_str(), &g), SXAI_OK);
  sxai_grids_set_noise_seed(g, 3);

  char* report = nullptr;
  const char* targets[] = {"keyword=alpha"};
  ASSERT_EQ(sxai_explain(o, u, targets, 1, g, 2, &report), SXAI_OK);
  const std::string text = Take(report);
  const auto j = json::parse(text);
  ASSERT_EQ(j["targets"].size(), 1u);
  EXPECT_EQ(j["targets"][0]["words"].size(), 2u);
  EXPECT_EQ(j["targets"][0]["words"][1]["r"].get<double>(), 0.0);

  for (const char* fmt : {"html", "svg", "ansi", "json"}) {
    char* rendered = nullptr;
    ASSERT_EQ(sxai_render_report(text.c_str(), fmt, &rendered), SXAI_OK) << fmt;
    EXPECT_FALSE(Take(rendered).empty());
  }
  const char* bad_targets[] = {"keyword"};
  char* none = nullptr;
  EXPECT_EQ(sxai_explain(o, u, bad_targets, 1, g, 1, &none), SXAI_ERR_INVALID_ARGUMENT);

  const char* reports[] = {text.c_str(), text.c_str()};
  char *summary = nullptr, *wcsv = nullptr, *pcsv = nullptr;
  ASSERT_EQ(sxai_aggregate(reports, 2, 1, &summary, &wcsv, &pcsv), SXAI_OK);
  const auto s = json::parse(Take(summary));
  EXPECT_EQ(s["words"]["keyword"]["top"].size(), 1u);
  EXPECT_NE(Take(wcsv).find("alpha"), std::string::npos);
  EXPECT_NE(Take(pcsv).find("noise"), std::string::npos);

  sxai_grids_free(g);
  sxai_oracle_free(o);
  sxai_utterance_free(u);
  sxai_waveform_free(w);
}

TEST_F(CApi, ToyDatasetEvaluate) {
  sxai_toy_options topts;
  sxai_toy_options_init(&topts);
  topts.utterances = 6;
  ASSERT_EQ(sxai_generate_toy(dir_.string().c_str(), &topts), SXAI_OK);
  sxai_dataset* d = nullptr;
  ASSERT_EQ(sxai_dataset_load((dir_ / "manifest.json").string().c_str(), &d), SXAI_OK);
  ASSERT_EQ(sxai_dataset_size(d), 6u);
  EXPECT_STREQ(sxai_utterance_id(sxai_dataset_utterance(d, 0)), "toy_0000");
  EXPECT_EQ(sxai_dataset_utterance(d, 6), nullptr);
  char* rejected = nullptr;
  ASSERT_EQ(sxai_dataset_rejected_json(d, &rejected), SXAI_OK);
  EXPECT_EQ(Take(rejected), "[]");

  sxai_oracle* o = nullptr;
  const std::string spec = "toy:tone:" + (dir_ / "oracle.json").string();
  ASSERT_EQ(sxai_oracle_create(spec.c_str(), &o), SXAI_OK);
  sxai_evaluate_options eopts;
  sxai_evaluate_options_init(&eopts);
  eopts.explainer = "random";
  eopts.rounds = 3;
  char* report = nullptr;
  ASSERT_EQ(sxai_evaluate(o, d, &eopts, &report), SXAI_OK);
  const auto j = json::parse(Take(report));
  EXPECT_EQ(j["rounds"], 3);
  EXPECT_EQ(j["heads"]["keyword"]["random"]["comprehensiveness"]["rounds"].size(), 3u);
  eopts.explainer = "oracle";
  EXPECT_EQ(sxai_evaluate(o, d, &eopts, &report), SXAI_ERR_INVALID_ARGUMENT);

  topts.classes = 1;
  EXPECT_EQ(sxai_generate_toy(dir_.string().c_str(), &topts), SXAI_ERR_INVALID_ARGUMENT);
  sxai_oracle_free(o);
  sxai_dataset_free(d);
}

}  // namespace
