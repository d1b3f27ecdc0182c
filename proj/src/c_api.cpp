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

#include "sxai/sxai.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "sxai/aggregate.hpp"
#include "sxai/attribution.hpp"
#include "sxai/audio.hpp"
#include "sxai/error.hpp"
#include "sxai/faithfulness.hpp"
#include "sxai/manifest.hpp"
#include "sxai/oracle.hpp"
#include "sxai/perturb.hpp"
#include "sxai/render.hpp"
#include "sxai/report_io.hpp"
#include "sxai/toy.hpp"

struct sxai_waveform {
  sxai::Waveform w;
};

struct sxai_utterance {
  sxai::Utterance u;
};

struct sxai_dataset {
  sxai::Dataset d;
  std::vector<sxai_utterance> handles;
};

struct sxai_oracle {
  std::unique_ptr<sxai::Oracle> o;
};

struct sxai_grids {
  sxai::GridSet g;
};

namespace {

thread_local std::string g_last_error;

sxai_status Fail(sxai_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
sxai_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return SXAI_OK;
  } catch (const sxai::Error& e) {
    return Fail(static_cast<sxai_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(SXAI_ERR_FORMAT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SXAI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SXAI_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SXAI_ERR_INTERNAL, "unknown error");
  }
}

void Require(const void* p, const char* name) {
  if (p == nullptr) sxai::ThrowInvalid(std::string(name) + " must not be null");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

sxai::TargetSpec ParseTarget(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    sxai::ThrowInvalid("target must be head=class: '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

sxai::KSetMode ParseMode(const char* name) {
  const std::string m = name == nullptr ? "all_k" : name;
  if (m == "all_k") return sxai::KSetMode::kAllK;
  if (m == "percent_bins") return sxai::KSetMode::kPercentBins;
  sxai::ThrowInvalid("unknown k-set mode '" + m + "'");
}

}  // namespace

extern "C" {

const char* sxai_version(void) { return "0.1.0"; }

const char* sxai_last_error(void) { return g_last_error.c_str(); }

const char* sxai_status_name(sxai_status status) {
  switch (status) {
    case SXAI_OK: return "ok";
    case SXAI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SXAI_ERR_IO: return "i/o error";
    case SXAI_ERR_ORACLE: return "oracle error";
    case SXAI_ERR_FORMAT: return "format error";
    case SXAI_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void sxai_string_free(char* s) { std::free(s); }

sxai_status sxai_waveform_load(const char* path, sxai_waveform** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new sxai_waveform{sxai::LoadWaveform(path)};
  });
}

sxai_status sxai_waveform_from_samples(const float* samples, size_t count, int sample_rate,
                                       sxai_waveform** out) {
  return Guard([&] {
    Require(out, "out");
    if (count > 0) Require(samples, "samples");
    std::vector<float> v(samples, samples + count);
    *out = new sxai_waveform{sxai::Waveform(std::move(v), sample_rate)};
  });
}

sxai_status sxai_waveform_save(const sxai_waveform* w, const char* path) {
  return Guard([&] {
    Require(w, "waveform");
    Require(path, "path");
    sxai::SaveWaveform(w->w, path);
  });
}

size_t sxai_waveform_length(const sxai_waveform* w) { return w ? w->w.size() : 0; }

int sxai_waveform_sample_rate(const sxai_waveform* w) { return w ? w->w.sample_rate() : 0; }

const float* sxai_waveform_samples(const sxai_waveform* w) {
  return w ? w->w.samples().data() : nullptr;
}

void sxai_waveform_free(sxai_waveform* w) { delete w; }

sxai_status sxai_perturb(const sxai_waveform* w, const char* feature, double parameter,
                         uint64_t seed, sxai_waveform** out) {
  return Guard([&] {
    Require(w, "waveform");
    Require(feature, "feature");
    Require(out, "out");
    const auto f = sxai::ParseFeature(feature);
    if (!f) sxai::ThrowInvalid(std::string("unknown feature '") + feature + "'");
    sxai::PerturbationSpec spec{*f, parameter, seed};
    *out = new sxai_waveform{sxai::ApplyPerturbation(spec, w->w)};
  });
}

sxai_status sxai_mask_segment(const sxai_waveform* w, double start_s, double end_s,
                              sxai_waveform** out) {
  return Guard([&] {
    Require(w, "waveform");
    Require(out, "out");
    *out = new sxai_waveform{sxai::MaskSegment(w->w, {"", start_s, end_s})};
  });
}

sxai_status sxai_utterance_create(const char* id, const sxai_waveform* w,
                                  const char* alignment_path, const char* const* words,
                                  size_t word_count, sxai_utterance** out) {
  return Guard([&] {
    Require(w, "waveform");
    Require(out, "out");
    std::vector<sxai::WordSegment> segments;
    if (alignment_path != nullptr && *alignment_path != '\0') {
      segments = sxai::LoadAlignment(alignment_path);
    } else if (word_count > 0) {
      Require(words, "words");
      std::vector<std::string> list(words, words + word_count);
      segments = sxai::UniformAlignment(w->w, list);
    }
    *out = new sxai_utterance{
        sxai::MakeUtterance(id ? id : "utterance", w->w, std::move(segments))};
  });
}

size_t sxai_utterance_segment_count(const sxai_utterance* u) {
  return u ? u->u.segments.size() : 0;
}

const char* sxai_utterance_id(const sxai_utterance* u) { return u ? u->u.id.c_str() : ""; }

void sxai_utterance_free(sxai_utterance* u) { delete u; }

sxai_status sxai_dataset_load(const char* manifest_path, sxai_dataset** out) {
  return Guard([&] {
    Require(manifest_path, "manifest_path");
    Require(out, "out");
    auto d = std::make_unique<sxai_dataset>();
    d->d = sxai::LoadDataset(manifest_path);
    d->handles.reserve(d->d.utterances.size());
    for (const auto& u : d->d.utterances) d->handles.push_back({u});
    *out = d.release();
  });
}

size_t sxai_dataset_size(const sxai_dataset* d) { return d ? d->handles.size() : 0; }

const sxai_utterance* sxai_dataset_utterance(const sxai_dataset* d, size_t index) {
  if (d == nullptr || index >= d->handles.size()) return nullptr;
  return &d->handles[index];
}

sxai_status sxai_dataset_rejected_json(const sxai_dataset* d, char** out_json) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out_json, "out_json");
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : d->d.rejected) j.push_back({{"id", r.id}, {"reason", r.reason}});
    *out_json = CopyString(j.dump());
  });
}

void sxai_dataset_free(sxai_dataset* d) { delete d; }

sxai_status sxai_oracle_create(const char* spec, sxai_oracle** out) {
  return Guard([&] {
    Require(spec, "spec");
    Require(out, "out");
    *out = new sxai_oracle{sxai::CreateOracle(spec)};
  });
}

sxai_status sxai_oracle_schema_json(const sxai_oracle* o, char** out_json) {
  return Guard([&] {
    Require(o, "oracle");
    Require(out_json, "out_json");
    nlohmann::ordered_json heads = nlohmann::ordered_json::array();
    for (const auto& h : o->o->schema().heads()) {
      heads.push_back({{"name", h.name}, {"classes", h.classes}});
    }
    nlohmann::ordered_json j{{"sample_rate", o->o->sample_rate()}, {"heads", heads}};
    *out_json = CopyString(j.dump());
  });
}

sxai_status sxai_oracle_predict_json(const sxai_oracle* o, const sxai_waveform* w,
                                     char** out_json) {
  return Guard([&] {
    Require(o, "oracle");
    Require(w, "waveform");
    Require(out_json, "out_json");
    const auto p = o->o->Predict(w->w);
    const auto& heads = o->o->schema().heads();
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (size_t h = 0; h < heads.size(); ++h) {
      nlohmann::ordered_json probs = nlohmann::ordered_json::object();
      for (size_t c = 0; c < heads[h].classes.size(); ++c) {
        probs[heads[h].classes[c]] = p.heads()[h][c];
      }
      j[heads[h].name] = probs;
    }
    *out_json = CopyString(j.dump());
  });
}

void sxai_oracle_free(sxai_oracle* o) { delete o; }

sxai_status sxai_grids_load(const char* path, sxai_grids** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new sxai_grids{path ? sxai::LoadGridConfig(path) : sxai::GridSet::Defaults()};
  });
}

void sxai_grids_set_noise_seed(sxai_grids* g, uint64_t seed) {
  if (g) g->g.noise_seed = seed;
}

void sxai_grids_free(sxai_grids* g) { delete g; }

sxai_status sxai_explain(const sxai_oracle* o, const sxai_utterance* u,
                         const char* const* targets, size_t target_count,
                         const sxai_grids* grids, int jobs, char** out_json) {
  return Guard([&] {
    Require(o, "oracle");
    Require(u, "utterance");
    Require(out_json, "out_json");
    std::vector<sxai::TargetSpec> specs;
    for (size_t i = 0; i < target_count; ++i) {
      Require(targets[i], "target");
      specs.push_back(ParseTarget(targets[i]));
    }
    const auto g = grids ? grids->g : sxai::GridSet::Defaults();
    const auto report = sxai::Explain(*o->o, u->u, std::move(specs), g, jobs);
    *out_json = CopyString(sxai::AttributionReportToJson(report));
  });
}

sxai_status sxai_render_report(const char* report_json, const char* format, char** out) {
  return Guard([&] {
    Require(report_json, "report_json");
    Require(format, "format");
    Require(out, "out");
    const auto f = sxai::ParseRenderFormat(format);
    if (!f) sxai::ThrowInvalid(std::string("unknown format '") + format + "'");
    const auto report = sxai::AttributionReportFromJson(report_json);
    *out = CopyString(sxai::RenderReport(report, *f));
  });
}

void sxai_evaluate_options_init(sxai_evaluate_options* opts) {
  if (opts == nullptr) return;
  opts->explainer = "l1o";
  opts->rounds = 5;
  opts->seed = 0;
  opts->k_sets = "all_k";
  opts->jobs = 1;
}

sxai_status sxai_evaluate(const sxai_oracle* o, const sxai_dataset* d,
                          const sxai_evaluate_options* opts, char** out_json) {
  return Guard([&] {
    Require(o, "oracle");
    Require(d, "dataset");
    Require(out_json, "out_json");
    sxai_evaluate_options defaults;
    sxai_evaluate_options_init(&defaults);
    if (opts == nullptr) opts = &defaults;
    const std::string name = opts->explainer ? opts->explainer : "l1o";
    sxai::ExplainerKind kind;
    if (name == "l1o") {
      kind = sxai::LeaveOneOutKind();
    } else if (name == "random") {
      kind = sxai::RandomKind();
    } else {
      sxai::ThrowInvalid("unknown explainer '" + name + "'");
    }
    if (opts->rounds < 1) sxai::ThrowInvalid("rounds must be >= 1");
    sxai::EvaluateOptions eo;
    eo.rounds = opts->rounds;
    eo.seed = opts->seed;
    eo.mode = ParseMode(opts->k_sets);
    eo.jobs = opts->jobs;
    const auto report = sxai::Evaluate(*o->o, d->d.utterances, kind, eo);
    *out_json = CopyString(sxai::FaithfulnessReportToJson(report));
  });
}

sxai_status sxai_aggregate(const char* const* report_jsons, size_t count, size_t top_m,
                           char** out_summary_json, char** out_words_csv,
                           char** out_paralinguistic_csv) {
  return Guard([&] {
    if (count > 0) Require(report_jsons, "report_jsons");
    Require(out_summary_json, "out_summary_json");
    std::vector<sxai::AttributionReport> reports;
    reports.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      Require(report_jsons[i], "report_json");
      reports.push_back(sxai::AttributionReportFromJson(report_jsons[i]));
    }
    sxai::GlobalSummary summary{sxai::SummarizeWords(reports, top_m),
                                sxai::SummarizeParalinguistic(reports)};
    std::string json = sxai::GlobalSummaryToJson(summary);
    std::string words = sxai::WordSummaryToCsv(summary.words);
    std::string para = sxai::ParalinguisticSummaryToCsv(summary.paralinguistic);
    *out_summary_json = CopyString(json);
    if (out_words_csv) *out_words_csv = CopyString(words);
    if (out_paralinguistic_csv) *out_paralinguistic_csv = CopyString(para);
  });
}

void sxai_toy_options_init(sxai_toy_options* opts) {
  if (opts == nullptr) return;
  const sxai::ToyOptions d;
  opts->utterances = d.utterances;
  opts->classes = d.classes;
  opts->seed = d.seed;
  opts->sample_rate = d.sample_rate;
}

sxai_status sxai_generate_toy(const char* out_dir, const sxai_toy_options* opts) {
  return Guard([&] {
    Require(out_dir, "out_dir");
    sxai::ToyOptions o;
    if (opts) {
      o.utterances = opts->utterances;
      o.classes = opts->classes;
      o.seed = opts->seed;
      o.sample_rate = opts->sample_rate;
    }
    sxai::WriteToy(sxai::GenerateToy(o), out_dir);
  });
}

}  // extern "C"
