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

// Word-level ranking of token scores, mean reciprocal rank and token-level
// classification counts.

#ifndef PRONRES_EVALUATION_H_
#define PRONRES_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pronres/encoding.h"
#include "pronres/model.h"

namespace pronres {

// Word score = max over the word's token scores. Words without tokens score
// -infinity.
std::vector<double> WordScores(std::span<const double> token_scores,
                               const TokenAlignment &alignment);

// Words eligible for ranking: the candidates when the variant masks or
// filters, otherwise every paragraph word except the anaphor itself.
std::vector<int> RankableWords(const EncodedExample &example, const VariantFlags &variant);

// Orders `words` by descending score; ties go to the word nearest the
// anaphor, then to the earlier word.
std::vector<int> RankWords(const std::vector<double> &word_scores, std::vector<int> words,
                           int anaphor_word);

struct RankedPrediction {
  std::string instance_id;
  std::vector<int> ranking;
  std::vector<double> ranked_scores;
  int gold_word = -1;
  std::optional<int> rank_of_gold;  // nullopt: gold not rankable (rank infinity)

  double ReciprocalRank() const { return rank_of_gold ? 1.0 / *rank_of_gold : 0.0; }
};

RankedPrediction RankPrediction(const EncodedExample &example, const ScoreSequence &scores,
                                const VariantFlags &variant);

// Highest-scoring candidate word under word-level max aggregation. Throws
// UsageError for an empty candidate list.
int SelectAntecedent(const ScoreSequence &scores, const TokenAlignment &alignment,
                     const std::vector<int> &candidates, int anaphor_word);

// Mean reciprocal rank; throws UsageError for an empty list.
double Mrr(const std::vector<RankedPrediction> &predictions);

struct TokenCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  int64_t tn = 0;

  int64_t total() const { return tp + fp + fn + tn; }
  TokenCounts &operator+=(const TokenCounts &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const TokenCounts &) const = default;
};

// Predicted positive iff score >= threshold. Positions with include[i] == 0
// are skipped; an empty `include` counts every position.
TokenCounts TokenMetrics(std::span<const double> scores, std::span<const uint8_t> targets,
                         double threshold = 0.5, std::span<const uint8_t> include = {});

// Counts over the real word tokens of an example (appended rows and special
// markers excluded).
TokenCounts ExampleTokenMetrics(const EncodedExample &example, const ScoreSequence &scores,
                                double threshold = 0.5);

struct MetricsReport {
  std::string model;
  VariantFlags variant;
  std::string split;
  double mrr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  TokenCounts counts;
  int64_t instances = 0;
  std::vector<std::string> train_docs;
  std::vector<std::string> test_docs;

  std::string ToJson() const;
  static MetricsReport FromJson(std::string_view json);
};

// Micro-averaged rates from `counts` (0/0 is taken as 0) and MRR from
// `predictions`. Throws UsageError when no tokens were counted.
MetricsReport Aggregate(const TokenCounts &counts, const std::vector<RankedPrediction> &predictions,
                        const std::string &model, const VariantFlags &variant,
                        const std::string &split);

}  // namespace pronres

#endif  // PRONRES_EVALUATION_H_
