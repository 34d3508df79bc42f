// Copyright 2026 The pronres Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// C interface to the pronres library. Every function returns a status code
// (PRONRES_OK on success); the message of the last failure on the calling
// thread is available from pronres_last_error(). Strings returned through
// `char **` parameters are heap-allocated and must be released with
// pronres_string_free().

#ifndef PRONRES_PRONRES_H_
#define PRONRES_PRONRES_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define PRONRES_API __attribute__((visibility("default")))
#else
#define PRONRES_API
#endif

typedef enum {
  PRONRES_OK = 0,
  PRONRES_ERR_PARSE = 1,
  PRONRES_ERR_VALIDATION = 2,
  PRONRES_ERR_IO = 3,
  PRONRES_ERR_CONFIG = 4,
  PRONRES_ERR_SHAPE = 5,
  PRONRES_ERR_NUMERIC = 6,
  PRONRES_ERR_USAGE = 7,
  PRONRES_ERR_ALIGNMENT = 8,
  PRONRES_ERR_INTERNAL = 9,
} pronres_status;

typedef struct pronres_config pronres_config;
typedef struct pronres_model pronres_model;

PRONRES_API const char *pronres_version(void);
PRONRES_API const char *pronres_status_name(int status);
PRONRES_API const char *pronres_last_error(void);
PRONRES_API void pronres_string_free(char *s);

// Corpus preparation. Each writes one JSON document per input file into
// `out_dir` and a summary to `*report_json`:
//   {"files": n, "written": n, "errors": [{"file", "status", "message"}],
//    "stats": {...cleaning counters...}}
// A failing file does not stop the others; the first failure's status is
// returned.
PRONRES_API int pronres_convert_dir(const char *xml_dir, const char *out_dir,
                                    char **report_json);
PRONRES_API int pronres_clean_dir(const char *json_dir, const char *out_dir,
                                  char **report_json);
// Writes <out_dir>/train, <out_dir>/test and <out_dir>/_split.json.
PRONRES_API int pronres_split_dir(const char *json_dir, const char *out_dir, double ratio,
                                  uint64_t seed, char **report_json);

// Synthetic corpus: <out_dir>/corpus/*.json and <out_dir>/lexicon.json.
// `options_json` may be NULL or an object with any of: docs, seed,
// min_sentences, max_sentences, vocab, ambiguity, agreement_noise,
// attached_rate, adjective_rate, anaphor_rate, lead_sentences,
// nouns_per_sentence, unmarked_rate.
PRONRES_API int pronres_synth(const char *options_json, const char *out_dir);

// Run configuration.
PRONRES_API int pronres_config_load(const char *path, pronres_config **out);
PRONRES_API int pronres_config_from_json(const char *json, const char *base_dir,
                                         pronres_config **out);
PRONRES_API void pronres_config_free(pronres_config *config);
PRONRES_API int pronres_config_set_seed(pronres_config *config, uint64_t seed);
PRONRES_API int pronres_config_set_out_dir(pronres_config *config, const char *out_dir);
PRONRES_API int pronres_config_validate(const pronres_config *config);
PRONRES_API int pronres_config_to_json(const pronres_config *config, char **json);

// Trains the sequence model for the configured variant. Writes
// <out>/checkpoint.json and <out>/training_log.jsonl.
PRONRES_API int pronres_train(const pronres_config *config, char **summary_json);

// With no checkpoints, runs the full models x variants matrix; otherwise
// evaluates each checkpoint on the test split. Writes <out>/reports/*.json,
// <out>/metrics.json and <out>/error_analysis.jsonl.
PRONRES_API int pronres_evaluate(const pronres_config *config, const char *const *checkpoints,
                                 size_t num_checkpoints, char **summary_json);

PRONRES_API int pronres_model_load(const char *checkpoint_path, pronres_model **out);
PRONRES_API void pronres_model_free(pronres_model *model);
// `document_json` uses the corpus schema with exactly one word whose role is
// "anaphor" (its ref may be null). Output: [{"word", "position", "score"}]
// over the candidates, highest score first.
PRONRES_API int pronres_predict(const pronres_model *model, const char *document_json,
                                char **ranking_json);

// Summary table of the reports in <dir>/reports (or <dir> itself).
PRONRES_API int pronres_report(const char *dir, char **table);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // PRONRES_PRONRES_H_
