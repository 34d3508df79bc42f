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

// Feature-based token scorers: k-nearest neighbours, an RBF support vector
// machine with sigmoid calibration, and L2-regularized logistic regression.

#ifndef PRONRES_BASELINES_H_
#define PRONRES_BASELINES_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pronres/candidates.h"
#include "pronres/encoding.h"
#include "pronres/model.h"
#include "pronres/morphology.h"

namespace pronres {

enum class BaselineKind { kKnn, kMaxMargin, kLogistic };

const char *BaselineKindName(BaselineKind kind);
BaselineKind ParseBaselineKind(std::string_view name);  // throws ConfigError

// [number_agree, gender_agree, definite, sentence_distance,
//  person_first, person_second, person_third, person_unknown]
inline constexpr int kNumFeatures = 8;
using FeatureVector = std::array<double, kNumFeatures>;

const std::vector<std::string> &FeatureOrder();

// Agreement is 1 only when both sides are known and equal. Person is the
// anaphor's.
FeatureVector WordFeatures(const MorphFeatures &word, int sentence_distance,
                           const MorphFeatures &anaphor);

// One vector per paragraph word. Candidates keep their extracted features;
// other words are analyzed from surface and POS.
std::vector<FeatureVector> FeaturizeWords(const ResolutionInstance &instance,
                                          const Analyzer &analyzer);

// One vector per real token (markers get a zero vector).
std::vector<FeatureVector> Featurize(const ResolutionInstance &instance,
                                     const TokenAlignment &alignment, const Analyzer &analyzer);

struct LabeledTokens {
  std::vector<FeatureVector> x;
  std::vector<uint8_t> y;

  // Adds the real word tokens of an example with its targets.
  void Append(const std::vector<FeatureVector> &features, const EncodedExample &example);
  size_t size() const { return x.size(); }
};

struct KnnSearch {
  int k_min = 10;
  int k_max = 30;
  int folds = 5;
  uint64_t seed = 1;
};

// Indices of the k nearest training vectors (Euclidean), nearer first, ties
// by training order.
std::vector<int> NearestNeighbors(std::span<const FeatureVector> train, const FeatureVector &query,
                                  int k);

struct BaselineModel {
  BaselineKind kind = BaselineKind::kKnn;

  // knn
  int k = 0;
  std::vector<FeatureVector> train_x;
  std::vector<uint8_t> train_y;
  std::vector<double> k_scores;  // cross-validated F1 for k_min..k_max

  // logistic
  std::array<double, kNumFeatures> weights{};
  double bias = 0.0;

  // max_margin: f(x) = sum_i coef_i K(sv_i, x) - rho, p = 1 / (1 + exp(A f + B))
  std::vector<FeatureVector> support;
  std::vector<double> coef;
  double rho = 0.0;
  double gamma = 0.0;
  double platt_a = 0.0;
  double platt_b = 0.0;

  double Decision(const FeatureVector &x) const;  // max_margin only
  double ScoreToken(const FeatureVector &x) const;
  std::vector<double> ScoreTokens(std::span<const FeatureVector> x) const;

  std::string ToJson() const;
  static BaselineModel FromJson(std::string_view json);
  void Save(const std::filesystem::path &path) const;
  static BaselineModel Load(const std::filesystem::path &path);
};

// Throws UsageError when the data has a single class.
BaselineModel Fit(const LabeledTokens &data, BaselineKind kind, const KnnSearch &search = {});

BaselineModel FitKnn(const LabeledTokens &data, int k);
BaselineModel FitLogistic(const LabeledTokens &data, double c = 1.0);
BaselineModel FitMaxMargin(const LabeledTokens &data, double c = 1.0, uint64_t seed = 1);

// Scores every row of `example`: real tokens from the model, markers and
// appended rows epsilon, then the candidate mask when the variant masks.
ScoreSequence ScoreExample(const BaselineModel &model, const std::vector<FeatureVector> &features,
                           const EncodedExample &example, const VariantFlags &variant);

}  // namespace pronres

#endif  // PRONRES_BASELINES_H_
