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


// Run configuration, the tagging/encoding pipeline and the experiment runner
// over models x variants.

#ifndef PRONRES_EXPERIMENT_H_
#define PRONRES_EXPERIMENT_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pronres/baselines.h"
#include "pronres/candidates.h"
#include "pronres/corpus.h"
#include "pronres/encoding.h"
#include "pronres/error.h"
#include "pronres/evaluation.h"
#include "pronres/model.h"
#include "pronres/morphology.h"

namespace pronres {

// base, append, mask and filter; each adds one flag to the previous.
VariantFlags ParseVariant(std::string_view name);  // throws ConfigError
std::vector<VariantFlags> StandardVariants();

struct RunConfig {
  std::filesystem::path corpus_dir;
  std::optional<std::filesystem::path> lexicon;
  std::filesystem::path out_dir = "out";

  ProviderConfig provider;
  std::vector<std::string> taggers = {"corpus"};
  std::string analyzer = "arabic_rules";
  CandidateOptions candidates;

  TrainingConfig training;  // training.variant is the variant for `train`
  double split_ratio = 0.7;
  double dev_fraction = 0.1;
  std::vector<std::string> models = {"seq2seq", "knn", "max_margin", "logistic"};
  std::vector<VariantFlags> variants = StandardVariants();
  KnnSearch knn;
  uint64_t seed = 1;

  // Relative paths are resolved against `base_dir`. Throws ConfigError.
  static RunConfig FromJson(std::string_view json,
                            const std::filesystem::path &base_dir = ".");
  static RunConfig Load(const std::filesystem::path &path);
  std::string ToJson() const;

  void SetSeed(uint64_t seed);
  void Validate() const;  // names resolve, paths exist
  // Tagging and analysis settings recorded in checkpoints.
  std::string PipelineJson() const;
  void ApplyPipelineJson(std::string_view json);
};

// Registered taggers, analyzer and provider of a configuration.
class Pipeline {
 public:
  // `corpus` feeds the corpus tagger and must outlive construction only.
  Pipeline(const RunConfig &config, const std::vector<Document> &corpus);

  std::span<const Tagger *const> taggers() const { return tagger_ptrs_; }
  const Analyzer &analyzer() const { return *analyzer_; }
  const EmbeddingProvider &provider() const { return *provider_; }
  const CandidateOptions &candidates() const { return candidates_; }

 private:
  std::vector<std::unique_ptr<Tagger>> taggers_;
  std::vector<const Tagger *> tagger_ptrs_;
  std::unique_ptr<Analyzer> analyzer_;
  std::unique_ptr<EmbeddingProvider> provider_;
  CandidateOptions candidates_;
};

struct PreparedExample {
  ResolutionInstance instance;
  EncodedExample example;
  std::vector<FeatureVector> features;  // per real token
};

struct PreparedSet {
  std::vector<PreparedExample> items;
  InstanceAudit audit;
  WindowStats window;
  int skipped_no_gold = 0;

  std::vector<EncodedExample> Examples() const;
};

// Instances of every document with variant candidates, fitted to the token
// budget and encoded. Instances without a gold antecedent are skipped.
PreparedSet Prepare(const std::vector<Document> &docs, const Pipeline &pipeline,
                    const VariantFlags &variant);

struct ExperimentSplit {
  std::vector<Document> train;  // excludes dev
  std::vector<Document> dev;
  std::vector<Document> test;
  std::string id;

  std::vector<std::string> TrainDocIds() const;  // train + dev
  std::vector<std::string> TestDocIds() const;
};

// Document-level split by `split_ratio`, then `dev_fraction` of the training
// documents (at least one) held out for early stopping.
ExperimentSplit MakeSplit(const std::vector<Document> &docs, const RunConfig &config);

using Scorer = std::function<ScoreSequence(const PreparedExample &)>;

struct Evaluation {
  MetricsReport report;
  std::vector<RankedPrediction> predictions;
  std::string false_positives_jsonl;  // one record per wrongly ranked instance
};

Evaluation Evaluate(const PreparedSet &set, const Scorer &scorer, const std::string &model,
                    const VariantFlags &variant, const std::string &split);

Scorer Seq2SeqScorer(const ModelParameters &params, const VariantFlags &variant);
Scorer BaselineScorer(const BaselineModel &model, const VariantFlags &variant);

struct CellFailure {
  std::string model;
  VariantFlags variant;
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
};

struct ExperimentResult {
  std::string split_id;
  std::vector<MetricsReport> reports;
  std::vector<CellFailure> failures;
  std::vector<TrainingLog> logs;  // one per seq2seq cell, in report order
  std::string error_analysis_jsonl;
};

// One report per (model, variant) on the same test split. A failing cell is
// recorded and the remaining cells still run.
ExperimentResult RunExperiment(const std::vector<Document> &docs, const RunConfig &config);

// Cleans and loads the configured corpus directory.
std::vector<Document> LoadCleanCorpus(const RunConfig &config, CleaningStats *stats = nullptr);

}  // namespace pronres

#endif  // PRONRES_EXPERIMENT_H_
