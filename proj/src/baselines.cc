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


#include "pronres/baselines.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "pronres/error.h"
#include "pronres/random.h"

namespace pronres {

const char *BaselineKindName(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kKnn:
      return "knn";
    case BaselineKind::kMaxMargin:
      return "max_margin";
    case BaselineKind::kLogistic:
      return "logistic";
  }
  return "?";
}

BaselineKind ParseBaselineKind(std::string_view name) {
  if (name == "knn") return BaselineKind::kKnn;
  if (name == "max_margin" || name == "svm") return BaselineKind::kMaxMargin;
  if (name == "logistic") return BaselineKind::kLogistic;
  throw ConfigError("unknown baseline model '" + std::string(name) + "'");
}

const std::vector<std::string> &FeatureOrder() {
  static const std::vector<std::string> order = {
      "number_agree",  "gender_agree",  "definite",     "sentence_distance",
      "person_first",  "person_second", "person_third", "person_unknown"};
  return order;
}

FeatureVector WordFeatures(const MorphFeatures &word, int sentence_distance,
                           const MorphFeatures &anaphor) {
  FeatureVector f{};
  f[0] = word.number != Number::kUnknown && word.number == anaphor.number;
  f[1] = word.gender != Gender::kUnknown && word.gender == anaphor.gender;
  f[2] = word.definite.value_or(false);
  f[3] = sentence_distance;
  f[4 + static_cast<int>(anaphor.person)] = 1.0;
  return f;
}

std::vector<FeatureVector> FeaturizeWords(const ResolutionInstance &instance,
                                          const Analyzer &analyzer) {
  const int n = static_cast<int>(instance.paragraph.size());
  std::vector<const MorphFeatures *> extracted(n, nullptr);
  for (const Candidate &c : instance.candidates) {
    int p = instance.ParagraphIndex(c.location);
    if (p >= 0) extracted[p] = &c.morph;
  }
  const int anaphor_sentence = instance.word_sentence[instance.anaphor];
  std::vector<FeatureVector> out;
  out.reserve(n);
  for (int w = 0; w < n; ++w) {
    MorphFeatures morph;
    if (w == instance.anaphor) {
      morph = instance.anaphor_morph;
    } else if (extracted[w] != nullptr) {
      morph = *extracted[w];
    } else {
      morph = analyzer.Analyze(instance.paragraph[w].surface, instance.paragraph[w].pos);
    }
    int distance = std::max(0, anaphor_sentence - instance.word_sentence[w]);
    out.push_back(WordFeatures(morph, distance, instance.anaphor_morph));
  }
  return out;
}

std::vector<FeatureVector> Featurize(const ResolutionInstance &instance,
                                     const TokenAlignment &alignment, const Analyzer &analyzer) {
  if (alignment.num_words() != static_cast<int>(instance.paragraph.size()))
    throw ShapeError("alignment covers " + std::to_string(alignment.num_words()) +
                     " words, paragraph has " + std::to_string(instance.paragraph.size()));
  std::vector<FeatureVector> words = FeaturizeWords(instance, analyzer);
  std::vector<FeatureVector> out(alignment.total_tokens, FeatureVector{});
  for (int t = 0; t < alignment.total_tokens; ++t) {
    int w = alignment.token_word[t];
    if (w >= 0) out[t] = words[w];
  }
  return out;
}

void LabeledTokens::Append(const std::vector<FeatureVector> &features,
                           const EncodedExample &example) {
  if (static_cast<int>(features.size()) != example.real_tokens())
    throw ShapeError("example " + example.instance_id + ": " + std::to_string(features.size()) +
                     " feature rows for " + std::to_string(example.real_tokens()) + " tokens");
  for (int t = 0; t < example.real_tokens(); ++t) {
    if (example.alignment.token_word[t] < 0) continue;
    x.push_back(features[t]);
    y.push_back(example.y[t]);
  }
}

namespace {

double SquaredDistance(const FeatureVector &a, const FeatureVector &b) {
  double d = 0.0;
  for (int i = 0; i < kNumFeatures; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

double Dot(const std::array<double, kNumFeatures> &w, const FeatureVector &x) {
  double s = 0.0;
  for (int i = 0; i < kNumFeatures; ++i) s += w[i] * x[i];
  return s;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

void CheckTrainable(const LabeledTokens &data) {
  if (data.x.size() != data.y.size()) throw ShapeError("feature and label counts differ");
  size_t positives = std::count(data.y.begin(), data.y.end(), uint8_t{1});
  if (positives == 0 || positives == data.y.size())
    throw UsageError("baseline training data has a single class (" + std::to_string(positives) +
                     " positive of " + std::to_string(data.y.size()) + ")");
}

// Unique (vector, label) pairs with multiplicities, in first-seen order.
struct WeightedPoints {
  std::vector<FeatureVector> x;
  std::vector<int> y;  // +1 / -1
  std::vector<double> count;
};

WeightedPoints Deduplicate(const std::vector<FeatureVector> &x, const std::vector<uint8_t> &y,
                           const std::vector<size_t> &rows) {
  WeightedPoints p;
  std::map<std::pair<FeatureVector, int>, size_t> index;
  for (size_t r : rows) {
    int label = y[r] ? 1 : -1;
    auto [it, inserted] = index.try_emplace({x[r], label}, p.x.size());
    if (inserted) {
      p.x.push_back(x[r]);
      p.y.push_back(label);
      p.count.push_back(0.0);
    }
    p.count[it->second] += 1.0;
  }
  return p;
}

std::vector<size_t> AllRows(size_t n) {
  std::vector<size_t> rows(n);
  std::iota(rows.begin(), rows.end(), size_t{0});
  return rows;
}

// Stratified fold assignment: each class is shuffled and dealt round-robin.
std::vector<int> StratifiedFolds(const std::vector<uint8_t> &y, int folds, uint64_t seed) {
  std::vector<int> fold(y.size(), 0);
  Rng rng(seed);
  for (uint8_t label : {uint8_t{0}, uint8_t{1}}) {
    std::vector<size_t> rows;
    for (size_t i = 0; i < y.size(); ++i)
      if (y[i] == label) rows.push_back(i);
    rng.Shuffle(rows);
    for (size_t i = 0; i < rows.size(); ++i) fold[rows[i]] = static_cast<int>(i % folds);
  }
  return fold;
}

}  // namespace

std::vector<int> NearestNeighbors(std::span<const FeatureVector> train, const FeatureVector &query,
                                  int k) {
  std::vector<std::pair<double, int>> keyed(train.size());
  for (size_t i = 0; i < train.size(); ++i)
    keyed[i] = {SquaredDistance(train[i], query), static_cast<int>(i)};
  const size_t take = std::min(train.size(), static_cast<size_t>(std::max(k, 0)));
  std::partial_sort(keyed.begin(), keyed.begin() + take, keyed.end());
  std::vector<int> out(take);
  for (size_t i = 0; i < take; ++i) out[i] = keyed[i].second;
  return out;
}

// ---------------------------------------------------------------------------
// k-nearest neighbours.

BaselineModel FitKnn(const LabeledTokens &data, int k) {
  CheckTrainable(data);
  if (k <= 0) throw UsageError("knn needs k > 0");
  BaselineModel m;
  m.kind = BaselineKind::kKnn;
  m.k = k;
  m.train_x = data.x;
  m.train_y = data.y;
  return m;
}

namespace {

BaselineModel FitKnnSearch(const LabeledTokens &data, const KnnSearch &search) {
  CheckTrainable(data);
  if (search.k_min <= 0 || search.k_max < search.k_min)
    throw ConfigError("invalid knn k range [" + std::to_string(search.k_min) + ", " +
                      std::to_string(search.k_max) + "]");
  if (search.folds < 2) throw ConfigError("knn cross-validation needs at least 2 folds");
  const int nk = search.k_max - search.k_min + 1;
  std::vector<int64_t> tp(nk, 0), fp(nk, 0), fn(nk, 0);
  std::vector<int> fold = StratifiedFolds(data.y, search.folds, search.seed);
  for (int f = 0; f < search.folds; ++f) {
    std::vector<FeatureVector> train_x;
    std::vector<uint8_t> train_y;
    std::vector<size_t> held;
    for (size_t i = 0; i < data.size(); ++i) {
      if (fold[i] == f) {
        held.push_back(i);
      } else {
        train_x.push_back(data.x[i]);
        train_y.push_back(data.y[i]);
      }
    }
    std::map<FeatureVector, std::vector<int>> cache;  // prefix counts of positive neighbours
    for (size_t i : held) {
      auto it = cache.find(data.x[i]);
      if (it == cache.end()) {
        std::vector<int> nn = NearestNeighbors(train_x, data.x[i], search.k_max);
        std::vector<int> prefix(nn.size() + 1, 0);
        for (size_t r = 0; r < nn.size(); ++r) prefix[r + 1] = prefix[r] + train_y[nn[r]];
        it = cache.emplace(data.x[i], std::move(prefix)).first;
      }
      const std::vector<int> &prefix = it->second;
      for (int k = search.k_min; k <= search.k_max; ++k) {
        const int used = std::min<int>(k, static_cast<int>(prefix.size()) - 1);
        const bool predicted = used > 0 && 2 * prefix[used] >= used;
        const bool actual = data.y[i] != 0;
        const int c = k - search.k_min;
        if (predicted && actual) ++tp[c];
        else if (predicted) ++fp[c];
        else if (actual) ++fn[c];
      }
    }
  }
  BaselineModel m = FitKnn(data, search.k_min);
  double best = -1.0;
  for (int c = 0; c < nk; ++c) {
    const double den = 2.0 * tp[c] + fp[c] + fn[c];
    const double f1 = den > 0 ? 2.0 * tp[c] / den : 0.0;
    m.k_scores.push_back(f1);
    if (f1 > best) {
      best = f1;
      m.k = search.k_min + c;
    }
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Logistic regression: minimizes 0.5 |w|^2 + C sum log-loss, intercept
// unpenalized, by damped Newton iterations.

BaselineModel FitLogistic(const LabeledTokens &data, double c) {
  CheckTrainable(data);
  WeightedPoints p = Deduplicate(data.x, data.y, AllRows(data.size()));
  const int n = static_cast<int>(p.x.size());
  constexpr int d = kNumFeatures + 1;
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < kNumFeatures; ++j) x(i, j) = p.x[i][j];
    x(i, kNumFeatures) = 1.0;
  }
  Eigen::VectorXd t(n), weight(n);
  for (int i = 0; i < n; ++i) {
    t[i] = p.y[i] > 0 ? 1.0 : 0.0;
    weight[i] = c * p.count[i];
  }
  auto objective = [&](const Eigen::VectorXd &beta) {
    Eigen::VectorXd z = x * beta;
    double obj = 0.5 * beta.head(kNumFeatures).squaredNorm();
    for (int i = 0; i < n; ++i) {
      // log(1 + exp(-s z)) with s = +-1
      const double m = (t[i] > 0 ? 1.0 : -1.0) * z[i];
      obj += weight[i] * (m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)));
    }
    return obj;
  };
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  double current = objective(beta);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd z = x * beta;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
    grad.head(kNumFeatures) = beta.head(kNumFeatures);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < kNumFeatures; ++j) hess(j, j) = 1.0;
    for (int i = 0; i < n; ++i) {
      const double s = Sigmoid(z[i]);
      grad += weight[i] * (s - t[i]) * x.row(i).transpose();
      hess += weight[i] * s * (1.0 - s) * x.row(i).transpose() * x.row(i);
    }
    if (grad.norm() < 1e-10) break;
    hess(kNumFeatures, kNumFeatures) += 1e-12;
    Eigen::VectorXd step = hess.ldlt().solve(grad);
    double scale = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls, scale *= 0.5) {
      Eigen::VectorXd next = beta - scale * step;
      double value = objective(next);
      if (value <= current) {
        moved = value < current;
        beta = next;
        current = value;
        break;
      }
    }
    if (!moved) break;
  }
  BaselineModel m;
  m.kind = BaselineKind::kLogistic;
  for (int j = 0; j < kNumFeatures; ++j) m.weights[j] = beta[j];
  m.bias = beta[kNumFeatures];
  return m;
}

// ---------------------------------------------------------------------------
// Support vector machine.

namespace {

struct SvmSolution {
  std::vector<FeatureVector> support;
  std::vector<double> coef;
  double rho = 0.0;
};

double Rbf(const FeatureVector &a, const FeatureVector &b, double gamma) {
  return std::exp(-gamma * SquaredDistance(a, b));
}

// Dual coordinate descent with second-order working-set selection. Point i
// has box constraint [0, c * count_i].
SvmSolution SolveSvm(const WeightedPoints &p, double c, double gamma) {
  const int n = static_cast<int>(p.x.size());
  constexpr double kTau = 1e-12, kEps = 1e-3;
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) q(i, j) = q(j, i) = p.y[i] * p.y[j] * Rbf(p.x[i], p.x[j], gamma);
  std::vector<double> bound(n), alpha(n, 0.0), g(n, -1.0);
  for (int i = 0; i < n; ++i) bound[i] = c * p.count[i];
  auto upper = [&](int i) { return alpha[i] >= bound[i]; };
  auto lower = [&](int i) { return alpha[i] <= 0.0; };

  const int64_t max_iter = std::max<int64_t>(10000000, 100LL * n);
  for (int64_t iter = 0; iter < max_iter; ++iter) {
    double gmax = -INFINITY, gmax2 = -INFINITY;
    int i = -1;
    for (int t = 0; t < n; ++t) {
      if (p.y[t] == 1) {
        if (!upper(t) && -g[t] >= gmax) gmax = -g[t], i = t;
      } else if (!lower(t) && g[t] >= gmax) {
        gmax = g[t], i = t;
      }
    }
    if (i < 0) break;
    int j = -1;
    double obj_min = INFINITY;
    for (int t = 0; t < n; ++t) {
      if (p.y[t] == 1) {
        if (lower(t)) continue;
        const double diff = gmax + g[t];
        gmax2 = std::max(gmax2, g[t]);
        if (diff > 0) {
          double quad = q(i, i) + q(t, t) - 2.0 * p.y[i] * q(i, t);
          const double obj = -diff * diff / (quad > 0 ? quad : kTau);
          if (obj <= obj_min) obj_min = obj, j = t;
        }
      } else {
        if (upper(t)) continue;
        const double diff = gmax - g[t];
        gmax2 = std::max(gmax2, -g[t]);
        if (diff > 0) {
          double quad = q(i, i) + q(t, t) + 2.0 * p.y[i] * q(i, t);
          const double obj = -diff * diff / (quad > 0 ? quad : kTau);
          if (obj <= obj_min) obj_min = obj, j = t;
        }
      }
    }
    if (gmax + gmax2 < kEps || j < 0) break;

    const double ai = alpha[i], aj = alpha[j], ci = bound[i], cj = bound[j];
    if (p.y[i] != p.y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-g[i] - g[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) alpha[j] = 0, alpha[i] = diff;
      } else if (alpha[i] < 0) {
        alpha[i] = 0, alpha[j] = -diff;
      }
      if (diff > ci - cj) {
        if (alpha[i] > ci) alpha[i] = ci, alpha[j] = ci - diff;
      } else if (alpha[j] > cj) {
        alpha[j] = cj, alpha[i] = cj + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (g[i] - g[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > ci) {
        if (alpha[i] > ci) alpha[i] = ci, alpha[j] = sum - ci;
      } else if (alpha[j] < 0) {
        alpha[j] = 0, alpha[i] = sum;
      }
      if (sum > cj) {
        if (alpha[j] > cj) alpha[j] = cj, alpha[i] = sum - cj;
      } else if (alpha[i] < 0) {
        alpha[i] = 0, alpha[j] = sum;
      }
    }
    const double di = alpha[i] - ai, dj = alpha[j] - aj;
    for (int t = 0; t < n; ++t) g[t] += q(t, i) * di + q(t, j) * dj;
  }

  double ub = INFINITY, lb = -INFINITY, sum_free = 0.0;
  int free = 0;
  for (int i = 0; i < n; ++i) {
    const double yg = p.y[i] * g[i];
    if (upper(i)) {
      if (p.y[i] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(i)) {
      if (p.y[i] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  SvmSolution s;
  s.rho = free > 0 ? sum_free / free : (ub + lb) / 2.0;
  for (int i = 0; i < n; ++i) {
    if (alpha[i] > 0) {
      s.support.push_back(p.x[i]);
      s.coef.push_back(alpha[i] * p.y[i]);
    }
  }
  return s;
}

double SvmDecision(const std::vector<FeatureVector> &support, const std::vector<double> &coef,
                   double rho, double gamma, const FeatureVector &x) {
  double f = -rho;
  for (size_t i = 0; i < support.size(); ++i) f += coef[i] * Rbf(support[i], x, gamma);
  return f;
}

// Sigmoid fit of decision values to labels (Newton with backtracking and
// smoothed targets). Returns (A, B) with p = 1 / (1 + exp(A f + B)).
std::pair<double, double> FitPlatt(const std::vector<double> &dec, const std::vector<int> &label,
                                   const std::vector<double> &count) {
  double prior1 = 0, prior0 = 0;
  for (size_t i = 0; i < dec.size(); ++i) (label[i] > 0 ? prior1 : prior0) += count[i];
  const double hi = (prior1 + 1.0) / (prior1 + 2.0), lo = 1.0 / (prior0 + 2.0);
  const int n = static_cast<int>(dec.size());
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = label[i] > 0 ? hi : lo;
  double a = 0.0, b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto value = [&](double aa, double bb) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = dec[i] * aa + bb;
      f += count[i] * (z >= 0 ? t[i] * z + std::log1p(std::exp(-z))
                              : (t[i] - 1.0) * z + std::log1p(std::exp(z)));
    }
    return f;
  };
  double fval = value(a, b);
  constexpr double kSigma = 1e-12, kMinStep = 1e-10;
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = dec[i] * a + b;
      double pr, qr;
      if (z >= 0) {
        pr = std::exp(-z) / (1.0 + std::exp(-z));
        qr = 1.0 / (1.0 + std::exp(-z));
      } else {
        pr = 1.0 / (1.0 + std::exp(z));
        qr = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = count[i] * pr * qr;
      h11 += dec[i] * dec[i] * d2;
      h22 += d2;
      h21 += dec[i] * d2;
      const double d1 = count[i] * (t[i] - pr);
      g1 += dec[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da, nb = b + step * db;
      const double nf = value(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na, b = nb, fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return {a, b};
}

double ScaleGamma(const std::vector<FeatureVector> &x) {
  double sum = 0.0, sq = 0.0;
  for (const FeatureVector &v : x)
    for (double e : v) sum += e, sq += e * e;
  const double count = static_cast<double>(x.size()) * kNumFeatures;
  const double mean = sum / count;
  const double var = sq / count - mean * mean;
  return var > 0 ? 1.0 / (kNumFeatures * var) : 1.0;
}

}  // namespace

BaselineModel FitMaxMargin(const LabeledTokens &data, double c, uint64_t seed) {
  CheckTrainable(data);
  BaselineModel m;
  m.kind = BaselineKind::kMaxMargin;
  m.gamma = ScaleGamma(data.x);

  constexpr int kFolds = 5;
  std::vector<int> fold = StratifiedFolds(data.y, kFolds, seed);
  std::vector<double> dec(data.size(), 0.0);
  for (int f = 0; f < kFolds; ++f) {
    std::vector<size_t> train_rows;
    for (size_t i = 0; i < data.size(); ++i)
      if (fold[i] != f) train_rows.push_back(i);
    WeightedPoints p = Deduplicate(data.x, data.y, train_rows);
    SvmSolution s = SolveSvm(p, c, m.gamma);
    std::map<FeatureVector, double> cache;
    for (size_t i = 0; i < data.size(); ++i) {
      if (fold[i] != f) continue;
      auto it = cache.find(data.x[i]);
      if (it == cache.end())
        it = cache.emplace(data.x[i], SvmDecision(s.support, s.coef, s.rho, m.gamma, data.x[i]))
                 .first;
      dec[i] = it->second;
    }
  }
  // Sigmoid fit on held-out decision values, merged by (value, label).
  std::map<std::pair<double, int>, double> merged;
  for (size_t i = 0; i < data.size(); ++i) merged[{dec[i], data.y[i] ? 1 : -1}] += 1.0;
  std::vector<double> values, counts;
  std::vector<int> labels;
  for (const auto &[key, n] : merged) {
    values.push_back(key.first);
    labels.push_back(key.second);
    counts.push_back(n);
  }
  std::tie(m.platt_a, m.platt_b) = FitPlatt(values, labels, counts);

  SvmSolution full = SolveSvm(Deduplicate(data.x, data.y, AllRows(data.size())), c, m.gamma);
  m.support = std::move(full.support);
  m.coef = std::move(full.coef);
  m.rho = full.rho;
  return m;
}

BaselineModel Fit(const LabeledTokens &data, BaselineKind kind, const KnnSearch &search) {
  switch (kind) {
    case BaselineKind::kKnn:
      return FitKnnSearch(data, search);
    case BaselineKind::kLogistic:
      return FitLogistic(data);
    case BaselineKind::kMaxMargin:
      return FitMaxMargin(data, 1.0, search.seed);
  }
  throw ConfigError("unknown baseline kind");
}

// ---------------------------------------------------------------------------
// Scoring.

double BaselineModel::Decision(const FeatureVector &x) const {
  return SvmDecision(support, coef, rho, gamma, x);
}

double BaselineModel::ScoreToken(const FeatureVector &x) const {
  switch (kind) {
    case BaselineKind::kKnn: {
      if (k <= 0) throw UsageError("knn model is not fitted");
      std::vector<int> nn = NearestNeighbors(train_x, x, k);
      int positive = 0;
      for (int i : nn) positive += train_y[i];
      return static_cast<double>(positive) / static_cast<double>(k);
    }
    case BaselineKind::kLogistic:
      return Sigmoid(Dot(weights, x) + bias);
    case BaselineKind::kMaxMargin:
      return Sigmoid(-(platt_a * Decision(x) + platt_b));
  }
  return 0.0;
}

std::vector<double> BaselineModel::ScoreTokens(std::span<const FeatureVector> x) const {
  std::map<FeatureVector, double> cache;
  std::vector<double> out;
  out.reserve(x.size());
  for (const FeatureVector &v : x) {
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, ScoreToken(v)).first;
    out.push_back(it->second);
  }
  return out;
}

ScoreSequence ScoreExample(const BaselineModel &model, const std::vector<FeatureVector> &features,
                           const EncodedExample &example, const VariantFlags &variant) {
  if (static_cast<int>(features.size()) != example.real_tokens())
    throw ShapeError("example " + example.instance_id + ": " + std::to_string(features.size()) +
                     " feature rows for " + std::to_string(example.real_tokens()) + " tokens");
  ScoreSequence s;
  s.scores.assign(example.rows(), kMaskEpsilon);
  std::vector<double> token = model.ScoreTokens(features);
  for (int t = 0; t < example.real_tokens(); ++t) {
    if (example.alignment.token_word[t] >= 0) s.scores[t] = token[t];
  }
  if (variant.mask) {
    s = ApplyCandidateMask(s, example.candidate_mask);
    if (example.appended_span) {
      for (int t = example.appended_span->begin; t < example.appended_span->end; ++t)
        s.scores[t] = kMaskEpsilon;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Model files.

namespace {

constexpr int kBaselineVersion = 1;

nlohmann::ordered_json VectorsJson(const std::vector<FeatureVector> &v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const FeatureVector &f : v) a.push_back(std::vector<double>(f.begin(), f.end()));
  return a;
}

std::vector<FeatureVector> VectorsFromJson(const nlohmann::json &j) {
  std::vector<FeatureVector> out;
  for (const auto &row : j) {
    if (row.size() != kNumFeatures) throw ValidationError("feature row has wrong length");
    FeatureVector f;
    for (int i = 0; i < kNumFeatures; ++i) f[i] = row[i].get<double>();
    out.push_back(f);
  }
  return out;
}

}  // namespace

std::string BaselineModel::ToJson() const {
  nlohmann::ordered_json j;
  j["format"] = "pronres-baseline";
  j["version"] = kBaselineVersion;
  j["kind"] = BaselineKindName(kind);
  j["feature_order"] = FeatureOrder();
  switch (kind) {
    case BaselineKind::kKnn:
      j["k"] = k;
      j["k_scores"] = k_scores;
      j["data"] = {{"x", VectorsJson(train_x)}, {"y", train_y}};
      break;
    case BaselineKind::kLogistic:
      j["weights"] = std::vector<double>(weights.begin(), weights.end());
      j["bias"] = bias;
      break;
    case BaselineKind::kMaxMargin:
      j["gamma"] = gamma;
      j["rho"] = rho;
      j["platt"] = {platt_a, platt_b};
      j["data"] = {{"support", VectorsJson(support)}, {"coef", coef}};
      break;
  }
  return j.dump();
}

BaselineModel BaselineModel::FromJson(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text.begin(), text.end());
    if (j.value("format", "") != "pronres-baseline")
      throw ValidationError("not a pronres baseline model");
    if (j.value("version", 0) != kBaselineVersion)
      throw ValidationError("unsupported baseline model version");
    if (j.at("feature_order").get<std::vector<std::string>>() != FeatureOrder())
      throw ValidationError("baseline model has a different feature order");
    BaselineModel m;
    m.kind = ParseBaselineKind(j.at("kind").get<std::string>());
    switch (m.kind) {
      case BaselineKind::kKnn:
        m.k = j.at("k").get<int>();
        m.k_scores = j.value("k_scores", std::vector<double>{});
        m.train_x = VectorsFromJson(j.at("data").at("x"));
        m.train_y = j.at("data").at("y").get<std::vector<uint8_t>>();
        if (m.train_x.size() != m.train_y.size())
          throw ValidationError("knn data has mismatched x/y lengths");
        break;
      case BaselineKind::kLogistic: {
        auto w = j.at("weights").get<std::vector<double>>();
        if (w.size() != kNumFeatures) throw ValidationError("logistic weights have wrong length");
        std::copy(w.begin(), w.end(), m.weights.begin());
        m.bias = j.at("bias").get<double>();
        break;
      }
      case BaselineKind::kMaxMargin:
        m.gamma = j.at("gamma").get<double>();
        m.rho = j.at("rho").get<double>();
        m.platt_a = j.at("platt").at(0).get<double>();
        m.platt_b = j.at("platt").at(1).get<double>();
        m.support = VectorsFromJson(j.at("data").at("support"));
        m.coef = j.at("data").at("coef").get<std::vector<double>>();
        if (m.support.size() != m.coef.size())
          throw ValidationError("svm data has mismatched support/coef lengths");
        break;
    }
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("baseline model: ") + e.what());
  }
}

void BaselineModel::Save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << ToJson() << '\n';
}

BaselineModel BaselineModel::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

}  // namespace pronres
