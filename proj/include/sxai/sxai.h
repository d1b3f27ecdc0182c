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

/*
 * sxai C API. Every call returns an sxai_status; on failure a description is
 * available from sxai_last_error() on the calling thread until the next call.
 * Objects are opaque handles released with their *_free function. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with sxai_string_free().
 */

#ifndef SXAI_SXAI_H_
#define SXAI_SXAI_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SXAI_BUILDING_LIBRARY)
#define SXAI_API __attribute__((visibility("default")))
#else
#define SXAI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sxai_status {
  SXAI_OK = 0,
  SXAI_ERR_INVALID_ARGUMENT = 1,
  SXAI_ERR_IO = 2,
  SXAI_ERR_ORACLE = 3,
  SXAI_ERR_FORMAT = 4,
  SXAI_ERR_INTERNAL = 5
} sxai_status;

typedef struct sxai_waveform sxai_waveform;
typedef struct sxai_utterance sxai_utterance;
typedef struct sxai_dataset sxai_dataset;
typedef struct sxai_oracle sxai_oracle;
typedef struct sxai_grids sxai_grids;

SXAI_API const char* sxai_version(void);
SXAI_API const char* sxai_last_error(void);
SXAI_API const char* sxai_status_name(sxai_status status);
SXAI_API void sxai_string_free(char* s);

/* Waveforms */
SXAI_API sxai_status sxai_waveform_load(const char* path, sxai_waveform** out);
SXAI_API sxai_status sxai_waveform_from_samples(const float* samples, size_t count,
                                                int sample_rate, sxai_waveform** out);
SXAI_API sxai_status sxai_waveform_save(const sxai_waveform* w, const char* path);
SXAI_API size_t sxai_waveform_length(const sxai_waveform* w);
SXAI_API int sxai_waveform_sample_rate(const sxai_waveform* w);
SXAI_API const float* sxai_waveform_samples(const sxai_waveform* w);
SXAI_API void sxai_waveform_free(sxai_waveform* w);

/* feature: "pitch" | "stretch" | "noise" | "reverb"; seed is used by noise. */
SXAI_API sxai_status sxai_perturb(const sxai_waveform* w, const char* feature, double parameter,
                                  uint64_t seed, sxai_waveform** out);
SXAI_API sxai_status sxai_mask_segment(const sxai_waveform* w, double start_s, double end_s,
                                       sxai_waveform** out);

/* Utterances. alignment_path takes precedence over words; both may be NULL /
 * empty for an utterance without segments. */
SXAI_API sxai_status sxai_utterance_create(const char* id, const sxai_waveform* w,
                                           const char* alignment_path,
                                           const char* const* words, size_t word_count,
                                           sxai_utterance** out);
SXAI_API size_t sxai_utterance_segment_count(const sxai_utterance* u);
SXAI_API void sxai_utterance_free(sxai_utterance* u);

/* Datasets (manifest JSON). Entries that fail to load are listed in
 * sxai_dataset_rejected_json. */
SXAI_API sxai_status sxai_dataset_load(const char* manifest_path, sxai_dataset** out);
SXAI_API size_t sxai_dataset_size(const sxai_dataset* d);
SXAI_API const sxai_utterance* sxai_dataset_utterance(const sxai_dataset* d, size_t index);
SXAI_API const char* sxai_utterance_id(const sxai_utterance* u);
SXAI_API sxai_status sxai_dataset_rejected_json(const sxai_dataset* d, char** out_json);
SXAI_API void sxai_dataset_free(sxai_dataset* d);

/* Oracles: "toy:tone[:cfg.json]", "toy:amplitude[:cfg.json]",
 * "toy:constant[:cfg.json]", "remote:http://host:port", "remote" (uses
 * SXAI_ORACLE_URL). */
SXAI_API sxai_status sxai_oracle_create(const char* spec, sxai_oracle** out);
SXAI_API sxai_status sxai_oracle_schema_json(const sxai_oracle* o, char** out_json);
SXAI_API sxai_status sxai_oracle_predict_json(const sxai_oracle* o, const sxai_waveform* w,
                                              char** out_json);
SXAI_API void sxai_oracle_free(sxai_oracle* o);

/* Perturbation grids. path == NULL gives the defaults. */
SXAI_API sxai_status sxai_grids_load(const char* path, sxai_grids** out);
SXAI_API void sxai_grids_set_noise_seed(sxai_grids* g, uint64_t seed);
SXAI_API void sxai_grids_free(sxai_grids* g);

/* Attribution. targets: "head=class" strings, or NULL/0 for the predicted
 * class of every head. Output is the attribution report JSON. */
SXAI_API sxai_status sxai_explain(const sxai_oracle* o, const sxai_utterance* u,
                                  const char* const* targets, size_t target_count,
                                  const sxai_grids* grids, int jobs, char** out_json);
/* format: "json" | "html" | "svg" | "ansi" */
SXAI_API sxai_status sxai_render_report(const char* report_json, const char* format,
                                        char** out);

/* Faithfulness evaluation. */
typedef struct sxai_evaluate_options {
  const char* explainer; /* "l1o" | "random" */
  int rounds;            /* stochastic explainers only */
  uint64_t seed;
  const char* k_sets;    /* "all_k" | "percent_bins" */
  int jobs;
} sxai_evaluate_options;

SXAI_API void sxai_evaluate_options_init(sxai_evaluate_options* opts);
SXAI_API sxai_status sxai_evaluate(const sxai_oracle* o, const sxai_dataset* d,
                                   const sxai_evaluate_options* opts, char** out_json);

/* Aggregation over attribution report JSON documents. */
SXAI_API sxai_status sxai_aggregate(const char* const* report_jsons, size_t count,
                                    size_t top_m, char** out_summary_json,
                                    char** out_words_csv, char** out_paralinguistic_csv);

/* Toy benchmark generation into out_dir. */
typedef struct sxai_toy_options {
  size_t utterances;
  size_t classes;
  uint64_t seed;
  int sample_rate;
} sxai_toy_options;

SXAI_API void sxai_toy_options_init(sxai_toy_options* opts);
SXAI_API sxai_status sxai_generate_toy(const char* out_dir, const sxai_toy_options* opts);

#ifdef __cplusplus
}
#endif

#endif  // SXAI_SXAI_H_
