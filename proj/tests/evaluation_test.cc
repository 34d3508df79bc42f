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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "model_test.h"
#include "pronres/error.h"

namespace pronres {
namespace {

RankedPrediction WithRank(std::optional<int> rank) {
  RankedPrediction p;
  p.rank_of_gold = rank;
  return p;
}

// Example whose words have the given token counts; anaphor is the last word.
EncodedExample Words(const std::vector<int> &tokens_per_word, int gold,
                     const std::vector<int> &candidates) {
  EncodedExample ex;
  int t = 0;
  for (size_t w = 0; w < tokens_per_word.size(); ++w) {
    ex.alignment.word_to_tokens.push_back({t, t + tokens_per_word[w]});
    for (int k = 0; k < tokens_per_word[w]; ++k) ex.alignment.token_word.push_back(static_cast<int>(w));
    t += tokens_per_word[w];
  }
  ex.alignment.total_tokens = t;
  ex.x = Eigen::MatrixXd::Zero(t, 3);
  ex.y.assign(t, 0);
  ex.candidate_mask.assign(t, 0);
  ex.anaphor_word = static_cast<int>(tokens_per_word.size()) - 1;
  ex.gold_word = gold;
  ex.candidate_words = candidates;
  for (int c : candidates) {
    for (int k = ex.alignment.word_to_tokens[c].begin; k < ex.alignment.word_to_tokens[c].end; ++k)
      ex.candidate_mask[k] = 1;
  }
  for (int k = ex.alignment.word_to_tokens[gold].begin; k < ex.alignment.word_to_tokens[gold].end; ++k)
    ex.y[k] = 1;
  return ex;
}

ScoreSequence Seq(std::vector<double> s) {
  ScoreSequence out;
  out.scores = std::move(s);
  return out;
}

TEST(MrrTest, PerfectModel) {
  EXPECT_EQ(Mrr({WithRank(1), WithRank(1), WithRank(1)}), 1.0);
}

TEST(MrrTest, RanksOneTwoFour) {
  double mrr = Mrr({WithRank(1), WithRank(2), WithRank(4)});
  EXPECT_EQ(mrr, (1.0 + 0.5 + 0.25) / 3.0);
  EXPECT_NEAR(mrr, 0.583333, 1e-6);
}

TEST(MrrTest, AbsentGoldContributesZero) {
  EXPECT_EQ(Mrr({WithRank(1), WithRank(std::nullopt)}), 0.5);
  EXPECT_THROW(Mrr({}), UsageError);
}

TEST(MrrTest, GoldOutsideMaskedCandidates) {
  EncodedExample ex = Words({1, 1, 1, 1}, 0, {1, 2});
  VariantFlags mask;
  mask.mask = true;
  RankedPrediction p = RankPrediction(ex, Seq({0.9, 0.5, 0.4, 0.1}), mask);
  EXPECT_FALSE(p.rank_of_gold.has_value());
  EXPECT_EQ(p.ranking, (std::vector<int>{1, 2}));
  EXPECT_EQ(RankPrediction(ex, Seq({0.9, 0.5, 0.4, 0.1}), {}).rank_of_gold, 1);
}

TEST(SelectTest, SingleCandidate) {
  EncodedExample ex = Words({1, 1, 1}, 0, {0});
  EXPECT_EQ(SelectAntecedent(Seq({0.1, 0.9, 0.2}), ex.alignment, {0}, 2), 0);
  EXPECT_THROW(SelectAntecedent(Seq({0.1, 0.9, 0.2}), ex.alignment, {}, 2), UsageError);
}

TEST(SelectTest, MaxAggregation) {
  EncodedExample ex = Words({2, 1, 1}, 0, {0, 1});
  EXPECT_EQ(SelectAntecedent(Seq({0.2, 0.9, 0.8, 0.0}), ex.alignment, {0, 1}, 2), 0);
}

TEST(SelectTest, TieGoesToNearerThenEarlier) {
  EncodedExample ex = Words({1, 1, 1, 1, 1}, 0, {0, 1, 2});
  EXPECT_EQ(SelectAntecedent(Seq({0.5, 0.5, 0.5, 0.1, 0.0}), ex.alignment, {0, 1, 2}, 4), 2);
  EXPECT_EQ(SelectAntecedent(Seq({0.7, 0.5, 0.7, 0.1, 0.0}), ex.alignment, {0, 1, 2}, 4), 2);
  // Equidistant words on both sides of the anaphor: the earlier wins.
  std::vector<double> w = {0.3, 0.6, 0.2, 0.6};
  EXPECT_EQ(RankWords(w, {1, 3}, 2), (std::vector<int>{1, 3}));
}

TEST(TokenMetricsTest, Examples) {
  const double s[] = {0.6, 0.4, 0.7};
  const uint8_t y[] = {1, 0, 0};
  TokenCounts c = TokenMetrics(s, y, 0.5);
  EXPECT_EQ(c, (TokenCounts{1, 1, 0, 1}));
  const double exact[] = {1.0, 0.0, 0.0};
  TokenCounts e = TokenMetrics(exact, y);
  EXPECT_EQ(e.fp + e.fn, 0);
  const double zeros[] = {0.0, 0.0, 0.0};
  const uint8_t two[] = {1, 1, 0};
  TokenCounts z = TokenMetrics(zeros, two);
  EXPECT_EQ(z.fn, 2);
  EXPECT_EQ(z.tp, 0);
  const uint8_t shortened[] = {1, 0};
  EXPECT_THROW(TokenMetrics(s, shortened), ShapeError);
}

TEST(TokenMetricsTest, ExcludesAppendedAndMarkers) {
  EncodedExample ex = Words({1, 1, 1}, 0, {0, 1});
  ex.alignment.token_word[1] = -1;
  ex.x.conservativeResize(4, Eigen::NoChange);
  ex.y.push_back(0);
  ex.candidate_mask.push_back(0);
  ex.appended_span = TokenSpan{3, 4};
  TokenCounts c = ExampleTokenMetrics(ex, Seq({0.9, 0.9, 0.9, 0.9}));
  EXPECT_EQ(c, (TokenCounts{1, 1, 0, 0}));
}

void ExpectIdentities(const MetricsReport &r) {
  const double tp = r.counts.tp, fp = r.counts.fp, fn = r.counts.fn, tn = r.counts.tn;
  const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  EXPECT_NEAR(r.precision, p, 1e-12);
  EXPECT_NEAR(r.recall, rec, 1e-12);
  EXPECT_NEAR(r.f1, p + rec > 0 ? 2 * p * rec / (p + rec) : 0.0, 1e-12);
  EXPECT_NEAR(r.accuracy, (tp + tn) / (tp + fp + fn + tn), 1e-12);
}

TEST(AggregateTest, Examples) {
  MetricsReport a = Aggregate({1, 0, 0, 9}, {WithRank(1)}, "m", {}, "s");
  EXPECT_EQ(a.precision, 1.0);
  EXPECT_EQ(a.recall, 1.0);
  EXPECT_EQ(a.f1, 1.0);
  EXPECT_EQ(a.accuracy, 1.0);
  MetricsReport b = Aggregate({0, 0, 2, 8}, {WithRank(2)}, "m", {}, "s");
  EXPECT_EQ(b.precision, 0.0);
  EXPECT_EQ(b.recall, 0.0);
  EXPECT_EQ(b.f1, 0.0);
  EXPECT_EQ(b.accuracy, 0.8);
  MetricsReport c = Aggregate({5, 5, 5, 985}, {WithRank(1)}, "m", {}, "s");
  EXPECT_EQ(c.precision, 0.5);
  EXPECT_EQ(c.recall, 0.5);
  EXPECT_EQ(c.f1, 0.5);
  EXPECT_EQ(c.accuracy, 0.990);
  EXPECT_THROW(Aggregate({}, {}, "m", {}, "s"), UsageError);
}

TEST(AggregateTest, IdentitiesOnRandomCounts) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    TokenCounts c{static_cast<int64_t>(rng() % 50), static_cast<int64_t>(rng() % 50),
                  static_cast<int64_t>(rng() % 50), static_cast<int64_t>(rng() % 1000)};
    if (c.total() == 0) continue;
    MetricsReport r = Aggregate(c, {WithRank(1 + static_cast<int>(rng() % 3))}, "m", {}, "s");
    ExpectIdentities(r);
    MetricsReport back = MetricsReport::FromJson(r.ToJson());
    ExpectIdentities(back);
    EXPECT_EQ(back.counts, r.counts);
  }
}

TEST(ReportTest, JsonShape) {
  VariantFlags v;
  v.mask = true;
  MetricsReport r = Aggregate({1, 2, 3, 4}, {WithRank(2)}, "knn", v, "split-1");
  std::string j = r.ToJson();
  EXPECT_EQ(j.rfind(R"({"model":"knn","variant":{"append":false,"mask":true,"filter":false},)"
                    R"("split":"split-1","mrr":0.5,)",
                    0),
            0u)
      << j;
  EXPECT_THROW(MetricsReport::FromJson("{}"), ValidationError);
}

// Ranks by brute force: 1 + number of rankable words that beat gold under
// (score desc, distance asc, index asc).
std::optional<int> BruteForceRank(const EncodedExample &ex, const std::vector<double> &tokens,
                                  const std::vector<int> &rankable) {
  auto word_score = [&](int w) {
    double best = -INFINITY;
    for (int t = ex.alignment.word_to_tokens[w].begin; t < ex.alignment.word_to_tokens[w].end; ++t)
      best = std::max(best, tokens[t]);
    return best;
  };
  const int g = *ex.gold_word;
  if (std::find(rankable.begin(), rankable.end(), g) == rankable.end()) return std::nullopt;
  int rank = 1;
  for (int w : rankable) {
    if (w == g) continue;
    double sw = word_score(w), sg = word_score(g);
    int dw = std::abs(w - ex.anaphor_word), dg = std::abs(g - ex.anaphor_word);
    if (sw > sg || (sw == sg && (dw < dg || (dw == dg && w < g)))) ++rank;
  }
  return rank;
}

TEST(MrrOracleTest, BruteForceAgreement) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VariantFlags mask;
  mask.mask = true;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RankedPrediction> preds;
    double expect = 0.0;
    const int n = 1 + static_cast<int>(rng() % 5);
    const bool masked = trial % 2;
    for (int i = 0; i < n; ++i) {
      const int words = 3 + static_cast<int>(rng() % 5);
      std::vector<int> sizes(words);
      for (int &s : sizes) s = 1 + static_cast<int>(rng() % 3);
      std::vector<int> cands;
      for (int w = 0; w + 1 < words; ++w)
        if (rng() % 2) cands.push_back(w);
      if (cands.empty()) cands.push_back(0);
      const int gold = static_cast<int>(rng() % (words - 1));
      EncodedExample ex = Words(sizes, gold, cands);
      std::vector<double> tokens(ex.real_tokens());
      for (double &t : tokens) t = std::round(u(rng) * 4) / 4;  // ties are common
      std::vector<int> rankable;
      if (masked) {
        rankable = cands;
      } else {
        for (int w = 0; w + 1 < words; ++w) rankable.push_back(w);
      }
      std::optional<int> r = BruteForceRank(ex, tokens, rankable);
      expect += r ? 1.0 / *r : 0.0;
      preds.push_back(RankPrediction(ex, Seq(tokens), masked ? mask : VariantFlags{}));
      EXPECT_EQ(preds.back().rank_of_gold, r);
    }
    EXPECT_NEAR(Mrr(preds), expect / n, 1e-12);
  }
}

TEST(RankTest, ArgmaxInvariance) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    EncodedExample ex = Words({1, 2, 1, 3, 1}, 1, {0, 1, 2, 3});
    std::vector<double> s(ex.real_tokens());
    for (double &v : s) v = u(rng);
    std::vector<double> t = s;
    for (double &v : t) v = std::exp(3.0 * v) - 7.0;
    RankedPrediction a = RankPrediction(ex, Seq(s), {}), b = RankPrediction(ex, Seq(t), {});
    EXPECT_EQ(a.ranking, b.ranking);
    EXPECT_EQ(a.rank_of_gold, b.rank_of_gold);
    EXPECT_EQ(SelectAntecedent(Seq(s), ex.alignment, ex.candidate_words, ex.anaphor_word),
              SelectAntecedent(Seq(t), ex.alignment, ex.candidate_words, ex.anaphor_word));
  }
}

TEST(MrrRangeTest, OneIffAllFirst) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RankedPrediction> p;
    bool all_first = true;
    for (int i = 0; i < 4; ++i) {
      int r = 1 + static_cast<int>(rng() % 2);
      all_first &= r == 1;
      p.push_back(WithRank(r));
    }
    double m = Mrr(p);
    EXPECT_GT(m, 0.0);
    EXPECT_LE(m, 1.0);
    EXPECT_EQ(m == 1.0, all_first);
  }
}

}  // namespace
}  // namespace pronres
