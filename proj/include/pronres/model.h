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

// Bi-LSTM token scorer: a forward and a backward LSTM over the encoded
// sequence, a linear layer with a sigmoid per token, the optional candidate
// mask and the summed binary cross-entropy. Gradients are computed by hand
// (backpropagation through time) and the model is trained with Adam.

#ifndef PRONRES_MODEL_H_
#define PRONRES_MODEL_H_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pronres/encoding.h"

namespace pronres {

// Added after masking so no score is exactly zero.
inline constexpr double kMaskEpsilon = 1e-16;
// Scores are clamped to [kLogClamp, 1 - kLogClamp] inside the loss.
inline constexpr double kLogClamp = 1e-7;

// One LSTM direction. Gate blocks are stacked in the order input, forget,
// cell candidate, output.
struct LstmWeights {
  Eigen::MatrixXd input;      // 4H x D
  Eigen::MatrixXd recurrent;  // 4H x H
  Eigen::VectorXd bias;       // 4H
};

struct ModelParameters {
  int input_dim = 0;
  int hidden = 0;
  LstmWeights forward;
  LstmWeights backward;
  Eigen::VectorXd out_weight;  // 2H
  double out_bias = 0.0;

  static ModelParameters Zeros(int input_dim, int hidden);
  // Uniform(-1/sqrt(H), 1/sqrt(H)) weights, zero biases except forget = 1.
  static ModelParameters Initialize(int input_dim, int hidden, uint64_t seed);

  int64_t NumParameters() const;
  std::vector<double> Flatten() const;
  void Unflatten(std::span<const double> values);
  bool AllFinite() const;
  void CheckShapes() const;
};

// Hidden states of both directions: row t = [h_t^forward; h_t^backward].
Eigen::MatrixXd BiLstmForward(const Eigen::MatrixXd &x, const ModelParameters &params);

struct ScoreSequence {
  std::vector<double> scores;
  bool masked = false;
  double epsilon = 0.0;
};

// s_t = sigmoid(W . H_t + b).
ScoreSequence Score(const Eigen::MatrixXd &hidden, const ModelParameters &params);

// out_t = s_t * mask_t + epsilon.
ScoreSequence ApplyCandidateMask(const ScoreSequence &scores, std::span<const uint8_t> mask,
                                 double epsilon = kMaskEpsilon);

// Summed per-token binary cross-entropy of one sequence.
double SequenceBce(std::span<const double> scores, std::span<const uint8_t> targets);
// Mean over examples of the per-sequence sums.
double SequenceBce(const std::vector<ScoreSequence> &scores,
                   const std::vector<std::vector<uint8_t>> &targets);

// Scores used for training and dev loss: the composition of BiLstmForward,
// Score and (with `mask`) ApplyCandidateMask.
ScoreSequence ForwardScores(const EncodedExample &example, const ModelParameters &params,
                            bool mask);

// Inference scores: ForwardScores with appended rows forced to epsilon so
// they never rank.
ScoreSequence Predict(const EncodedExample &example, const ModelParameters &params,
                      const VariantFlags &variant);

// Loss of one example and, if `gradient` is non-null, accumulates
// weight * dLoss/dParams into it.
double LossAndGradient(const EncodedExample &example, const ModelParameters &params, bool mask,
                       ModelParameters *gradient, double weight = 1.0);

class Adam {
 public:
  Adam(size_t size, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);
  void Step(std::vector<double> &params, const std::vector<double> &gradient);

 private:
  double learning_rate_, beta1_, beta2_, epsilon_;
  int64_t t_ = 0;
  std::vector<double> m_, v_;
};

struct TrainingConfig {
  double learning_rate = 0.005;
  int batch_size = 16;
  int max_epochs = 20;
  int patience = 5;
  uint64_t seed = 1;
  int hidden = 256;
  VariantFlags variant;

  void Validate() const;  // throws ConfigError
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_loss = 0.0;
  double dev_mrr = 0.0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  bool early_stopped = false;

  // One JSON object per line: {"epoch","train_loss","dev_loss","dev_mrr"}.
  std::string ToJsonl() const;
};

// Stops after `patience` consecutive epochs without a strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}
  // Returns true when `loss` is a new best.
  bool Update(int epoch, double loss);
  bool ShouldStop() const { return stale_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  int stale_ = 0;
  int best_epoch_ = 0;
  double best_loss_ = 0.0;
  bool has_best_ = false;
};

struct TrainResult {
  ModelParameters params;
  TrainingLog log;
};

// Adam on the batch-mean loss; returns the parameters of the best dev-loss
// epoch. Throws NumericError naming the epoch and batch on a non-finite loss.
TrainResult Train(const std::vector<EncodedExample> &train, const std::vector<EncodedExample> &dev,
                  const TrainingConfig &config);

struct Checkpoint {
  ModelParameters params;
  TrainingConfig training;
  ProviderConfig provider;
  std::string pipeline_json = "{}";  // tagging/analysis settings needed for prediction
};

void SaveCheckpoint(const Checkpoint &checkpoint, const std::filesystem::path &path);
Checkpoint LoadCheckpoint(const std::filesystem::path &path);

}  // namespace pronres

#endif  // PRONRES_MODEL_H_
