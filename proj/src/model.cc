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

#include "pronres/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pronres/error.h"
#include "pronres/evaluation.h"
#include "pronres/random.h"

namespace pronres {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

LstmWeights ZeroWeights(int input_dim, int hidden) {
  LstmWeights w;
  w.input = MatrixXd::Zero(4 * hidden, input_dim);
  w.recurrent = MatrixXd::Zero(4 * hidden, hidden);
  w.bias = VectorXd::Zero(4 * hidden);
  return w;
}

template <typename Params, typename F>
void ForEachBlock(Params &p, F &&f) {
  for (auto *w : {&p.forward, &p.backward}) {
    f(w->input.data(), w->input.size());
    f(w->recurrent.data(), w->recurrent.size());
    f(w->bias.data(), w->bias.size());
  }
  f(p.out_weight.data(), p.out_weight.size());
  f(&p.out_bias, Eigen::Index{1});
}

}  // namespace

ModelParameters ModelParameters::Zeros(int input_dim, int hidden) {
  if (input_dim <= 0 || hidden <= 0) throw ShapeError("model dimensions must be positive");
  ModelParameters p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.forward = ZeroWeights(input_dim, hidden);
  p.backward = ZeroWeights(input_dim, hidden);
  p.out_weight = VectorXd::Zero(2 * hidden);
  p.out_bias = 0.0;
  return p;
}

ModelParameters ModelParameters::Initialize(int input_dim, int hidden, uint64_t seed) {
  ModelParameters p = Zeros(input_dim, hidden);
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (LstmWeights *w : {&p.forward, &p.backward}) {
    for (Eigen::Index i = 0; i < w->input.size(); ++i) w->input.data()[i] = rng.Uniform(-bound, bound);
    for (Eigen::Index i = 0; i < w->recurrent.size(); ++i)
      w->recurrent.data()[i] = rng.Uniform(-bound, bound);
    w->bias.segment(hidden, hidden).setOnes();
  }
  const double out_bound = 1.0 / std::sqrt(static_cast<double>(2 * hidden));
  for (Eigen::Index i = 0; i < p.out_weight.size(); ++i)
    p.out_weight[i] = rng.Uniform(-out_bound, out_bound);
  return p;
}

int64_t ModelParameters::NumParameters() const {
  int64_t n = 0;
  ForEachBlock(*this, [&](const double *, Eigen::Index size) { n += size; });
  return n;
}

std::vector<double> ModelParameters::Flatten() const {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(NumParameters()));
  ForEachBlock(*this, [&](const double *data, Eigen::Index size) {
    out.insert(out.end(), data, data + size);
  });
  return out;
}

void ModelParameters::Unflatten(std::span<const double> values) {
  if (static_cast<int64_t>(values.size()) != NumParameters())
    throw ShapeError("parameter vector has " + std::to_string(values.size()) + " entries, expected " +
                     std::to_string(NumParameters()));
  size_t offset = 0;
  ForEachBlock(*this, [&](double *data, Eigen::Index size) {
    std::copy(values.begin() + offset, values.begin() + offset + size, data);
    offset += size;
  });
}

bool ModelParameters::AllFinite() const {
  bool finite = true;
  ForEachBlock(*this, [&](const double *data, Eigen::Index size) {
    for (Eigen::Index i = 0; i < size; ++i) finite = finite && std::isfinite(data[i]);
  });
  return finite;
}

void ModelParameters::CheckShapes() const {
  auto check = [&](const LstmWeights &w, const char *name) {
    if (w.input.rows() != 4 * hidden || w.input.cols() != input_dim ||
        w.recurrent.rows() != 4 * hidden || w.recurrent.cols() != hidden ||
        w.bias.size() != 4 * hidden) {
      throw ShapeError(std::string(name) + " LSTM weights do not match hidden=" +
                       std::to_string(hidden) + ", input=" + std::to_string(input_dim));
    }
  };
  check(forward, "forward");
  check(backward, "backward");
  if (out_weight.size() != 2 * hidden) throw ShapeError("output weight must have 2*hidden entries");
}

// ---------------------------------------------------------------------------
// Forward and backward passes.

namespace {

// Activations of one direction, indexed by sequence position.
struct DirectionTrace {
  MatrixXd gates;  // m x 4H, post-activation [i f g o]
  MatrixXd cell;   // m x H
  MatrixXd hidden; // m x H
};

DirectionTrace RunDirection(const MatrixXd &x, const LstmWeights &w, int hidden, bool reverse) {
  const Eigen::Index m = x.rows();
  DirectionTrace tr;
  tr.gates.resize(m, 4 * hidden);
  tr.cell.resize(m, hidden);
  tr.hidden.resize(m, hidden);
  const MatrixXd projected = x * w.input.transpose();  // m x 4H
  VectorXd h = VectorXd::Zero(hidden), c = VectorXd::Zero(hidden);
  VectorXd a(4 * hidden);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index t = reverse ? m - 1 - k : k;
    a.noalias() = projected.row(t).transpose() + w.recurrent * h + w.bias;
    for (int j = 0; j < hidden; ++j) {
      a[j] = Sigmoid(a[j]);
      a[hidden + j] = Sigmoid(a[hidden + j]);
      a[2 * hidden + j] = std::tanh(a[2 * hidden + j]);
      a[3 * hidden + j] = Sigmoid(a[3 * hidden + j]);
    }
    c = a.segment(hidden, hidden).cwiseProduct(c) +
        a.segment(0, hidden).cwiseProduct(a.segment(2 * hidden, hidden));
    h = a.segment(3 * hidden, hidden).cwiseProduct(c.array().tanh().matrix());
    tr.gates.row(t) = a.transpose();
    tr.cell.row(t) = c.transpose();
    tr.hidden.row(t) = h.transpose();
  }
  return tr;
}

void BackwardDirection(const MatrixXd &x, const LstmWeights &w, const DirectionTrace &tr,
                       const MatrixXd &d_hidden, int hidden, bool reverse, double weight,
                       LstmWeights *grad) {
  const Eigen::Index m = x.rows();
  MatrixXd d_pre(m, 4 * hidden);
  VectorXd dh_next = VectorXd::Zero(hidden), dc_next = VectorXd::Zero(hidden);
  VectorXd zero = VectorXd::Zero(hidden);
  VectorXd da(4 * hidden);
  for (Eigen::Index k = m - 1; k >= 0; --k) {
    const Eigen::Index t = reverse ? m - 1 - k : k;
    const bool has_prev = k > 0;
    const Eigen::Index prev = reverse ? t + 1 : t - 1;
    const VectorXd c_prev = has_prev ? VectorXd(tr.cell.row(prev).transpose()) : zero;
    const VectorXd h_prev = has_prev ? VectorXd(tr.hidden.row(prev).transpose()) : zero;
    const VectorXd dh = d_hidden.row(t).transpose() + dh_next;
    for (int j = 0; j < hidden; ++j) {
      const double i = tr.gates(t, j), f = tr.gates(t, hidden + j),
                   g = tr.gates(t, 2 * hidden + j), o = tr.gates(t, 3 * hidden + j);
      const double tc = std::tanh(tr.cell(t, j));
      const double d_o = dh[j] * tc;
      const double dc = dc_next[j] + dh[j] * o * (1.0 - tc * tc);
      da[j] = dc * g * i * (1.0 - i);
      da[hidden + j] = dc * c_prev[j] * f * (1.0 - f);
      da[2 * hidden + j] = dc * i * (1.0 - g * g);
      da[3 * hidden + j] = d_o * o * (1.0 - o);
      dc_next[j] = dc * f;
    }
    d_pre.row(t) = da.transpose();
    if (has_prev) grad->recurrent.noalias() += weight * da * h_prev.transpose();
    dh_next.noalias() = w.recurrent.transpose() * da;
  }
  grad->input.noalias() += weight * d_pre.transpose() * x;
  grad->bias.noalias() += weight * d_pre.colwise().sum().transpose();
}

void CheckInput(const MatrixXd &x, const ModelParameters &params) {
  if (x.cols() != params.input_dim)
    throw ShapeError("input rows have " + std::to_string(x.cols()) + " features, model expects " +
                     std::to_string(params.input_dim));
  if (x.rows() == 0) throw ShapeError("empty input sequence");
}

}  // namespace

MatrixXd BiLstmForward(const MatrixXd &x, const ModelParameters &params) {
  CheckInput(x, params);
  params.CheckShapes();
  DirectionTrace f = RunDirection(x, params.forward, params.hidden, false);
  DirectionTrace b = RunDirection(x, params.backward, params.hidden, true);
  MatrixXd h(x.rows(), 2 * params.hidden);
  h << f.hidden, b.hidden;
  return h;
}

ScoreSequence Score(const MatrixXd &hidden, const ModelParameters &params) {
  if (hidden.cols() != params.out_weight.size())
    throw ShapeError("hidden states have " + std::to_string(hidden.cols()) +
                     " columns, output layer expects " + std::to_string(params.out_weight.size()));
  ScoreSequence s;
  VectorXd logits = hidden * params.out_weight;
  s.scores.resize(logits.size());
  for (Eigen::Index t = 0; t < logits.size(); ++t) s.scores[t] = Sigmoid(logits[t] + params.out_bias);
  return s;
}

ScoreSequence ApplyCandidateMask(const ScoreSequence &scores, std::span<const uint8_t> mask,
                                 double epsilon) {
  if (mask.size() != scores.scores.size())
    throw ShapeError("mask length " + std::to_string(mask.size()) + " differs from " +
                     std::to_string(scores.scores.size()) + " scores");
  if (!(epsilon > 0.0)) throw UsageError("mask epsilon must be positive");
  ScoreSequence out;
  out.masked = true;
  out.epsilon = epsilon;
  out.scores.resize(mask.size());
  for (size_t i = 0; i < mask.size(); ++i)
    out.scores[i] = scores.scores[i] * static_cast<double>(mask[i]) + epsilon;
  return out;
}

namespace {

double Clamp(double s) { return std::clamp(s, kLogClamp, 1.0 - kLogClamp); }

double TokenBce(double s, uint8_t y) {
  const double c = Clamp(s);
  return y ? -std::log(c) : -std::log(1.0 - c);
}

}  // namespace

double SequenceBce(std::span<const double> scores, std::span<const uint8_t> targets) {
  if (scores.size() != targets.size())
    throw ShapeError("loss: " + std::to_string(scores.size()) + " scores vs " +
                     std::to_string(targets.size()) + " targets");
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) sum += TokenBce(scores[i], targets[i]);
  return sum;
}

double SequenceBce(const std::vector<ScoreSequence> &scores,
                   const std::vector<std::vector<uint8_t>> &targets) {
  if (scores.size() != targets.size() || scores.empty())
    throw ShapeError("loss: need matching, non-empty score and target lists");
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) sum += SequenceBce(scores[i].scores, targets[i]);
  return sum / static_cast<double>(scores.size());
}

ScoreSequence ForwardScores(const EncodedExample &example, const ModelParameters &params,
                            bool mask) {
  ScoreSequence s = Score(BiLstmForward(example.x, params), params);
  if (mask) s = ApplyCandidateMask(s, example.candidate_mask);
  return s;
}

ScoreSequence Predict(const EncodedExample &example, const ModelParameters &params,
                      const VariantFlags &variant) {
  ScoreSequence s = ForwardScores(example, params, variant.mask);
  if (example.appended_span) {
    for (int t = example.appended_span->begin; t < example.appended_span->end; ++t)
      s.scores[t] = kMaskEpsilon;
  }
  return s;
}

double LossAndGradient(const EncodedExample &example, const ModelParameters &params, bool mask,
                       ModelParameters *gradient, double weight) {
  const MatrixXd &x = example.x;
  CheckInput(x, params);
  params.CheckShapes();
  const int hidden = params.hidden;
  const Eigen::Index m = x.rows();
  if (static_cast<Eigen::Index>(example.y.size()) != m ||
      static_cast<Eigen::Index>(example.candidate_mask.size()) != m)
    throw ShapeError("example " + example.instance_id + ": Y/mask length differs from X");

  DirectionTrace f = RunDirection(x, params.forward, hidden, false);
  DirectionTrace b = RunDirection(x, params.backward, hidden, true);
  MatrixXd h(m, 2 * hidden);
  h << f.hidden, b.hidden;
  VectorXd logits = (h * params.out_weight).array() + params.out_bias;

  double loss = 0.0;
  VectorXd d_logit(m);
  for (Eigen::Index t = 0; t < m; ++t) {
    const double s = Sigmoid(logits[t]);
    const double keep = mask ? static_cast<double>(example.candidate_mask[t]) : 1.0;
    const double out = mask ? s * keep + kMaskEpsilon : s;
    const uint8_t y = example.y[t];
    loss += TokenBce(out, y);
    // Derivative of the unclamped loss evaluated at the clamped score.
    const double c = Clamp(out);
    const double d_out = (c - static_cast<double>(y)) / (c * (1.0 - c));
    d_logit[t] = d_out * keep * s * (1.0 - s);
  }
  if (gradient == nullptr) return loss;

  gradient->out_weight.noalias() += weight * h.transpose() * d_logit;
  gradient->out_bias += weight * d_logit.sum();
  const MatrixXd d_hidden = d_logit * params.out_weight.transpose();  // m x 2H
  BackwardDirection(x, params.forward, f, d_hidden.leftCols(hidden), hidden, false, weight,
                    &gradient->forward);
  BackwardDirection(x, params.backward, b, d_hidden.rightCols(hidden), hidden, true, weight,
                    &gradient->backward);
  return loss;
}

// ---------------------------------------------------------------------------
// Optimizer and training loop.

Adam::Adam(size_t size, double learning_rate, double beta1, double beta2, double epsilon)
    : learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon),
      m_(size, 0.0),
      v_(size, 0.0) {}

void Adam::Step(std::vector<double> &params, const std::vector<double> &gradient) {
  if (params.size() != m_.size() || gradient.size() != m_.size())
    throw ShapeError("optimizer state does not match parameter count");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * gradient[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * gradient[i] * gradient[i];
    const double m_hat = m_[i] / c1, v_hat = v_[i] / c2;
    params[i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + epsilon_);
  }
}

void TrainingConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (max_epochs <= 0) throw ConfigError("max_epochs must be positive");
  if (patience <= 0) throw ConfigError("patience must be positive");
  if (patience > max_epochs) throw ConfigError("patience must not exceed max_epochs");
  if (hidden <= 0) throw ConfigError("hidden size must be positive");
}

std::string TrainingLog::ToJsonl() const {
  std::string out;
  for (const EpochRecord &e : epochs) {
    nlohmann::ordered_json j;
    j["epoch"] = e.epoch;
    j["train_loss"] = e.train_loss;
    j["dev_loss"] = e.dev_loss;
    j["dev_mrr"] = e.dev_mrr;
    out += j.dump();
    out += '\n';
  }
  return out;
}

bool EarlyStopping::Update(int epoch, double loss) {
  if (!has_best_ || loss < best_loss_) {
    has_best_ = true;
    best_loss_ = loss;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

TrainResult Train(const std::vector<EncodedExample> &train, const std::vector<EncodedExample> &dev,
                  const TrainingConfig &config) {
  config.Validate();
  if (train.empty()) throw UsageError("training set is empty");
  if (dev.empty()) throw UsageError("dev set is empty");
  const int input_dim = static_cast<int>(train.front().x.cols());
  for (const auto *set : {&train, &dev}) {
    for (const EncodedExample &ex : *set) {
      if (ex.x.cols() != input_dim)
        throw ShapeError("example " + ex.instance_id + " has " + std::to_string(ex.x.cols()) +
                         " features, expected " + std::to_string(input_dim));
    }
  }
  const bool mask = config.variant.mask;
  ModelParameters params = ModelParameters::Initialize(input_dim, config.hidden, config.seed);
  ModelParameters zero = ModelParameters::Zeros(input_dim, config.hidden);
  std::vector<double> flat = params.Flatten();
  Adam adam(flat.size(), config.learning_rate);
  Rng rng(Mix64(config.seed ^ 0x7261696eULL));
  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  result.params = params;
  EarlyStopping stopping(config.patience);
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.Shuffle(order);
    double train_sum = 0.0;
    int batch_index = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      const double weight = 1.0 / static_cast<double>(end - start);
      ModelParameters grad = zero;
      for (size_t k = start; k < end; ++k) {
        const double loss = LossAndGradient(train[order[k]], params, mask, &grad, weight);
        if (!std::isfinite(loss))
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(batch_index) + " (example " +
                             train[order[k]].instance_id + ")");
        train_sum += loss;
      }
      std::vector<double> g = grad.Flatten();
      adam.Step(flat, g);
      params.Unflatten(flat);
      if (!params.AllFinite())
        throw NumericError("non-finite parameters after epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_index));
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = train_sum / static_cast<double>(train.size());
    double dev_sum = 0.0, rr_sum = 0.0;
    for (const EncodedExample &ex : dev) {
      dev_sum += LossAndGradient(ex, params, mask, nullptr);
      rr_sum += RankPrediction(ex, Predict(ex, params, config.variant), config.variant)
                    .ReciprocalRank();
    }
    record.dev_loss = dev_sum / static_cast<double>(dev.size());
    record.dev_mrr = rr_sum / static_cast<double>(dev.size());
    if (!std::isfinite(record.dev_loss))
      throw NumericError("non-finite dev loss at epoch " + std::to_string(epoch));
    result.log.epochs.push_back(record);
    if (stopping.Update(epoch, record.dev_loss)) result.params = params;
    if (stopping.ShouldStop()) {
      result.log.early_stopped = epoch < config.max_epochs;
      break;
    }
  }
  result.log.best_epoch = stopping.best_epoch();
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoints.

namespace {

constexpr int kCheckpointVersion = 1;

nlohmann::ordered_json MatrixJson(const MatrixXd &m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

MatrixXd MatrixFromJson(const nlohmann::json &j, Eigen::Index rows, Eigen::Index cols,
                        const std::string &name) {
  if (static_cast<Eigen::Index>(j.size()) != rows)
    throw ShapeError("checkpoint field " + name + " has wrong row count");
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ShapeError("checkpoint field " + name + " has wrong column count");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

VectorXd VectorFromJson(const nlohmann::json &j, Eigen::Index size, const std::string &name) {
  if (static_cast<Eigen::Index>(j.size()) != size)
    throw ShapeError("checkpoint field " + name + " has wrong length");
  VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = j[i].get<double>();
  return v;
}

nlohmann::ordered_json WeightsJson(const LstmWeights &w) {
  nlohmann::ordered_json j;
  j["input"] = MatrixJson(w.input);
  j["recurrent"] = MatrixJson(w.recurrent);
  j["bias"] = std::vector<double>(w.bias.data(), w.bias.data() + w.bias.size());
  return j;
}

LstmWeights WeightsFromJson(const nlohmann::json &j, int input_dim, int hidden,
                            const std::string &name) {
  LstmWeights w;
  w.input = MatrixFromJson(j.at("input"), 4 * hidden, input_dim, name + ".input");
  w.recurrent = MatrixFromJson(j.at("recurrent"), 4 * hidden, hidden, name + ".recurrent");
  w.bias = VectorFromJson(j.at("bias"), 4 * hidden, name + ".bias");
  return w;
}

}  // namespace

void SaveCheckpoint(const Checkpoint &ck, const std::filesystem::path &path) {
  nlohmann::ordered_json j;
  j["format"] = "pronres-checkpoint";
  j["version"] = kCheckpointVersion;
  j["provider"] = {{"name", ck.provider.name},
                   {"dim", ck.provider.stub.dim},
                   {"max_tokens", ck.provider.stub.max_tokens},
                   {"seed", ck.provider.stub.seed},
                   {"split_affixes", ck.provider.stub.split_affixes},
                   {"max_piece", ck.provider.stub.max_piece},
                   {"markers", ck.provider.stub.markers}};
  const TrainingConfig &t = ck.training;
  j["training"] = {{"learning_rate", t.learning_rate},
                   {"batch_size", t.batch_size},
                   {"max_epochs", t.max_epochs},
                   {"patience", t.patience},
                   {"seed", t.seed},
                   {"hidden", t.hidden},
                   {"variant",
                    {{"append", t.variant.append},
                     {"mask", t.variant.mask},
                     {"filter", t.variant.filter}}}};
  j["pipeline"] = nlohmann::ordered_json::parse(ck.pipeline_json);
  nlohmann::ordered_json p;
  p["input_dim"] = ck.params.input_dim;
  p["hidden"] = ck.params.hidden;
  p["forward"] = WeightsJson(ck.params.forward);
  p["backward"] = WeightsJson(ck.params.backward);
  p["out_weight"] =
      std::vector<double>(ck.params.out_weight.data(),
                          ck.params.out_weight.data() + ck.params.out_weight.size());
  p["out_bias"] = ck.params.out_bias;
  j["params"] = std::move(p);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << j.dump() << '\n';
}

Checkpoint LoadCheckpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    auto j = nlohmann::json::parse(buffer.str());
    if (j.value("format", "") != "pronres-checkpoint")
      throw ValidationError(path.string() + ": not a pronres checkpoint");
    if (j.value("version", 0) != kCheckpointVersion)
      throw ValidationError(path.string() + ": unsupported checkpoint version");
    Checkpoint ck;
    const auto &pj = j.at("provider");
    ck.provider.name = pj.at("name").get<std::string>();
    ck.provider.stub.dim = pj.at("dim").get<int>();
    ck.provider.stub.max_tokens = pj.at("max_tokens").get<int>();
    ck.provider.stub.seed = pj.at("seed").get<uint64_t>();
    ck.provider.stub.split_affixes = pj.at("split_affixes").get<bool>();
    ck.provider.stub.max_piece = pj.at("max_piece").get<int>();
    ck.provider.stub.markers = pj.at("markers").get<bool>();
    const auto &tj = j.at("training");
    ck.training.learning_rate = tj.at("learning_rate").get<double>();
    ck.training.batch_size = tj.at("batch_size").get<int>();
    ck.training.max_epochs = tj.at("max_epochs").get<int>();
    ck.training.patience = tj.at("patience").get<int>();
    ck.training.seed = tj.at("seed").get<uint64_t>();
    ck.training.hidden = tj.at("hidden").get<int>();
    ck.training.variant.append = tj.at("variant").at("append").get<bool>();
    ck.training.variant.mask = tj.at("variant").at("mask").get<bool>();
    ck.training.variant.filter = tj.at("variant").at("filter").get<bool>();
    ck.pipeline_json = j.value("pipeline", nlohmann::json::object()).dump();
    const auto &p = j.at("params");
    const int input_dim = p.at("input_dim").get<int>();
    const int hidden = p.at("hidden").get<int>();
    ck.params = ModelParameters::Zeros(input_dim, hidden);
    ck.params.forward = WeightsFromJson(p.at("forward"), input_dim, hidden, "forward");
    ck.params.backward = WeightsFromJson(p.at("backward"), input_dim, hidden, "backward");
    ck.params.out_weight = VectorFromJson(p.at("out_weight"), 2 * hidden, "out_weight");
    ck.params.out_bias = p.at("out_bias").get<double>();
    if (!ck.params.AllFinite()) throw ValidationError(path.string() + ": non-finite parameters");
    return ck;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace pronres
