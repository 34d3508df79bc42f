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


// Random encoded examples and a naive scalar Bi-LSTM used as test oracles.

#ifndef PRONRES_TESTS_MODEL_TEST_H_
#define PRONRES_TESTS_MODEL_TEST_H_

#include <cmath>
#include <random>
#include <vector>

#include "pronres/encoding.h"
#include "pronres/model.h"

namespace pronres::testing {

// One token per word; the anaphor is the last word and the gold a random
// earlier candidate.
inline EncodedExample RandomExample(std::mt19937_64 &rng, int m, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  EncodedExample ex;
  ex.instance_id = "r" + std::to_string(rng() % 100000);
  ex.x.resize(m, dim + 2);
  for (int t = 0; t < m; ++t)
    for (int k = 0; k < dim; ++k) ex.x(t, k) = u(rng);
  ex.anaphor_word = m - 1;
  ex.y.assign(m, 0);
  ex.candidate_mask.assign(m, 0);
  for (int t = 0; t + 1 < m; ++t) {
    if (rng() % 2) {
      ex.candidate_mask[t] = 1;
      ex.candidate_words.push_back(t);
    }
  }
  if (ex.candidate_words.empty()) {
    ex.candidate_mask[0] = 1;
    ex.candidate_words.push_back(0);
  }
  const int gold = ex.candidate_words[rng() % ex.candidate_words.size()];
  ex.gold_word = gold;
  ex.y[gold] = 1;
  for (int t = 0; t < m; ++t) {
    ex.x(t, dim) = t == m - 1;
    ex.x(t, dim + 1) = ex.candidate_mask[t];
    ex.alignment.word_to_tokens.push_back({t, t + 1});
    ex.alignment.token_word.push_back(t);
    ex.alignment.token_chars.push_back({2 * t, 2 * t + 1});
    ex.alignment.word_chars.push_back({2 * t, 2 * t + 1});
  }
  ex.alignment.total_tokens = m;
  return ex;
}

inline double NaiveSigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// Step-by-step LSTM over rows of x in the given order; returns h per row.
inline std::vector<std::vector<double>> NaiveDirection(const Eigen::MatrixXd &x, const LstmWeights &w,
                                                       int hidden, bool reverse) {
  const int m = static_cast<int>(x.rows()), d = static_cast<int>(x.cols());
  std::vector<std::vector<double>> out(m, std::vector<double>(hidden));
  std::vector<double> h(hidden, 0.0), c(hidden, 0.0);
  for (int k = 0; k < m; ++k) {
    const int t = reverse ? m - 1 - k : k;
    std::vector<double> pre(4 * hidden);
    for (int r = 0; r < 4 * hidden; ++r) {
      double s = w.bias[r];
      for (int j = 0; j < d; ++j) s += w.input(r, j) * x(t, j);
      for (int j = 0; j < hidden; ++j) s += w.recurrent(r, j) * h[j];
      pre[r] = s;
    }
    std::vector<double> nh(hidden), nc(hidden);
    for (int j = 0; j < hidden; ++j) {
      double i = NaiveSigmoid(pre[j]);
      double f = NaiveSigmoid(pre[hidden + j]);
      double g = std::tanh(pre[2 * hidden + j]);
      double o = NaiveSigmoid(pre[3 * hidden + j]);
      nc[j] = f * c[j] + i * g;
      nh[j] = o * std::tanh(nc[j]);
    }
    h = nh;
    c = nc;
    out[t] = h;
  }
  return out;
}

}  // namespace pronres::testing

#endif  // PRONRES_TESTS_MODEL_TEST_H_
