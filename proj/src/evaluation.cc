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

#include "pronres/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "pronres/error.h"

namespace pronres {

std::vector<double> WordScores(std::span<const double> token_scores,
                               const TokenAlignment &alignment) {
  std::vector<double> scores(alignment.word_to_tokens.size(),
                             -std::numeric_limits<double>::infinity());
  for (size_t w = 0; w < alignment.word_to_tokens.size(); ++w) {
    const TokenSpan span = alignment.word_to_tokens[w];
    for (int t = span.begin; t < span.end; ++t) scores[w] = std::max(scores[w], token_scores[t]);
  }
  return scores;
}

std::vector<int> RankableWords(const EncodedExample &example, const VariantFlags &variant) {
  if (variant.mask || variant.filter) return example.candidate_words;
  std::vector<int> words;
  for (int w = 0; w < example.alignment.num_words(); ++w) {
    if (w != example.anaphor_word) words.push_back(w);
  }
  return words;
}

std::vector<int> RankWords(const std::vector<double> &word_scores, std::vector<int> words,
                           int anaphor_word) {
  std::stable_sort(words.begin(), words.end(), [&](int a, int b) {
    if (word_scores[a] != word_scores[b]) return word_scores[a] > word_scores[b];
    int da = std::abs(anaphor_word - a), db = std::abs(anaphor_word - b);
    if (da != db) return da < db;
    return a < b;
  });
  return words;
}

RankedPrediction RankPrediction(const EncodedExample &example, const ScoreSequence &scores,
                                const VariantFlags &variant) {
  RankedPrediction p;
  p.instance_id = example.instance_id;
  p.gold_word = example.gold_word.value_or(-1);
  std::vector<double> word_scores = WordScores(scores.scores, example.alignment);
  p.ranking = RankWords(word_scores, RankableWords(example, variant), example.anaphor_word);
  for (size_t r = 0; r < p.ranking.size(); ++r) {
    p.ranked_scores.push_back(word_scores[p.ranking[r]]);
    if (p.ranking[r] == p.gold_word) p.rank_of_gold = static_cast<int>(r) + 1;
  }
  return p;
}

int SelectAntecedent(const ScoreSequence &scores, const TokenAlignment &alignment,
                     const std::vector<int> &candidates, int anaphor_word) {
  if (candidates.empty()) throw UsageError("cannot select an antecedent from no candidates");
  return RankWords(WordScores(scores.scores, alignment), candidates, anaphor_word).front();
}

double Mrr(const std::vector<RankedPrediction> &predictions) {
  if (predictions.empty()) throw UsageError("MRR of an empty prediction list");
  double sum = 0.0;
  for (const RankedPrediction &p : predictions) sum += p.ReciprocalRank();
  return sum / static_cast<double>(predictions.size());
}

TokenCounts TokenMetrics(std::span<const double> scores, std::span<const uint8_t> targets,
                         double threshold, std::span<const uint8_t> include) {
  if (scores.size() != targets.size() || (!include.empty() && include.size() != scores.size())) {
    throw ShapeError("token metrics: length mismatch (" + std::to_string(scores.size()) +
                     " scores, " + std::to_string(targets.size()) + " targets, " +
                     std::to_string(include.size()) + " include flags)");
  }
  TokenCounts c;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!include.empty() && !include[i]) continue;
    bool predicted = scores[i] >= threshold;
    bool actual = targets[i] != 0;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

TokenCounts ExampleTokenMetrics(const EncodedExample &example, const ScoreSequence &scores,
                                double threshold) {
  std::vector<uint8_t> include(example.rows(), 0);
  for (int t = 0; t < example.real_tokens(); ++t) include[t] = example.alignment.token_word[t] >= 0;
  return TokenMetrics(scores.scores, example.y, threshold, include);
}

namespace {

double Ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

MetricsReport Aggregate(const TokenCounts &counts, const std::vector<RankedPrediction> &predictions,
                        const std::string &model, const VariantFlags &variant,
                        const std::string &split) {
  if (counts.total() == 0) throw UsageError("aggregate: no tokens were counted");
  MetricsReport r;
  r.model = model;
  r.variant = variant;
  r.split = split;
  r.counts = counts;
  r.instances = static_cast<int64_t>(predictions.size());
  const double tp = static_cast<double>(counts.tp), fp = static_cast<double>(counts.fp),
               fn = static_cast<double>(counts.fn), tn = static_cast<double>(counts.tn);
  r.precision = Ratio(tp, tp + fp);
  r.recall = Ratio(tp, tp + fn);
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                                      : 0.0;
  r.accuracy = (tp + tn) / static_cast<double>(counts.total());
  r.mrr = predictions.empty() ? 0.0 : Mrr(predictions);
  return r;
}

std::string MetricsReport::ToJson() const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["variant"] = {{"append", variant.append}, {"mask", variant.mask}, {"filter", variant.filter}};
  j["split"] = split;
  j["mrr"] = mrr;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["accuracy"] = accuracy;
  j["counts"] = {{"tp", counts.tp},
                 {"fp", counts.fp},
                 {"fn", counts.fn},
                 {"tn", counts.tn},
                 {"instances", instances}};
  j["split_docs"] = {{"train", train_docs}, {"test", test_docs}};
  return j.dump();
}

MetricsReport MetricsReport::FromJson(std::string_view json) {
  try {
    auto j = nlohmann::json::parse(json.begin(), json.end());
    MetricsReport r;
    r.model = j.at("model").get<std::string>();
    r.variant.append = j.at("variant").at("append").get<bool>();
    r.variant.mask = j.at("variant").at("mask").get<bool>();
    r.variant.filter = j.at("variant").at("filter").get<bool>();
    r.split = j.at("split").get<std::string>();
    r.mrr = j.at("mrr").get<double>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    r.accuracy = j.at("accuracy").get<double>();
    const auto &c = j.at("counts");
    r.counts = {c.at("tp").get<int64_t>(), c.at("fp").get<int64_t>(), c.at("fn").get<int64_t>(),
                c.at("tn").get<int64_t>()};
    r.instances = c.value("instances", int64_t{0});
    if (j.contains("split_docs")) {
      r.train_docs = j["split_docs"].value("train", std::vector<std::string>{});
      r.test_docs = j["split_docs"].value("test", std::vector<std::string>{});
    }
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("metrics report: ") + e.what());
  }
}

}  // namespace pronres
