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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "model_test.h"
#include "pronres/baselines.h"
#include "pronres/corpus.h"
#include "pronres/evaluation.h"
#include "pronres/experiment.h"
#include "pronres/model.h"
#include "pronres/synth.h"
#include "test_util.h"

namespace pronres {
namespace {

using testing::DataDir;
using testing::RandomExample;
using testing::TempDir;

// Tolerances and sizes.
constexpr int kGradientInstances = 24;
constexpr double kGradientStep = 1e-5;
constexpr double kGradientTolerance = 1e-4;
constexpr double kGradientBudgetSeconds = 60.0;
constexpr int kMaskSequences = 1000;
constexpr int kMrrFixtures = 500;
constexpr double kMrrTolerance = 1e-12;
constexpr double kOverfitMrr = 0.95;
constexpr double kOverfitBudgetSeconds = 600.0;
constexpr int kKnnFeatureSets = 200;
constexpr double kIdentityTolerance = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string &what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Format(const char *fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

double WorstRelativeError(const EncodedExample &ex, const ModelParameters &params, bool mask) {
  ModelParameters grad = ModelParameters::Zeros(params.input_dim, params.hidden);
  LossAndGradient(ex, params, mask, &grad);
  const std::vector<double> analytic = grad.Flatten(), theta = params.Flatten();
  ModelParameters probe = params;
  double worst = 0.0;
  for (size_t i = 0; i < theta.size(); ++i) {
    std::vector<double> t = theta;
    t[i] = theta[i] + kGradientStep;
    probe.Unflatten(t);
    const double plus = LossAndGradient(ex, probe, mask, nullptr);
    t[i] = theta[i] - kGradientStep;
    probe.Unflatten(t);
    const double minus = LossAndGradient(ex, probe, mask, nullptr);
    const double numeric = (plus - minus) / (2.0 * kGradientStep);
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
  }
  return worst;
}

Outcome GradientCorrectness() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int i = 0; i < kGradientInstances; ++i) {
    const int m = 2 + i % 5, hidden = 1 + i % 4, dim = 2 + i % 3;
    ModelParameters p = ModelParameters::Initialize(dim + 2, hidden, 100 + i);
    EncodedExample ex = RandomExample(rng, m, dim);
    const double err = WorstRelativeError(ex, p, i % 2 == 1);
    worst = std::max(worst, err);
    o.Require(err < kGradientTolerance, Format("instance %.0f: relative error %.3g", i, err));
  }
  const double t = Seconds(start);
  o.Require(t < kGradientBudgetSeconds, Format("took %.1fs", t));
  if (o.pass) o.detail = Format("%.0f instances, worst relative error %.2e, %.2fs", kGradientInstances, worst, t);
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome MaskLaw() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < kMaskSequences && o.pass; ++i) {
    const int n = 1 + static_cast<int>(rng() % 40);
    ScoreSequence s;
    std::vector<uint8_t> mask(n);
    for (int t = 0; t < n; ++t) {
      s.scores.push_back(u(rng));
      mask[t] = rng() % 2;
    }
    ScoreSequence out = ApplyCandidateMask(s, mask);
    for (int t = 0; t < n; ++t) {
      const double expect = s.scores[t] * static_cast<double>(mask[t]) + 1e-16;
      o.Require(out.scores[t] == expect, Format("sequence %.0f position %.0f", i, t));
    }
  }
  VariantFlags masked;
  masked.mask = true;
  for (int i = 0; i < kMaskSequences && o.pass; ++i) {
    const int m = 3 + static_cast<int>(rng() % 8);
    EncodedExample ex = RandomExample(rng, m, 1);
    ScoreSequence raw;
    for (int t = 0; t < m; ++t) raw.scores.push_back(u(rng));
    ScoreSequence after = ApplyCandidateMask(raw, ex.candidate_mask);
    RankedPrediction a = RankPrediction(ex, raw, {}), b = RankPrediction(ex, after, {});
    o.Require(a.rank_of_gold && b.rank_of_gold && *b.rank_of_gold <= *a.rank_of_gold,
              Format("fixture %.0f: gold rank worsened", i));
  }
  if (o.pass) o.detail = Format("%.0f sequences exact, %.0f rank fixtures monotone", kMaskSequences, kMaskSequences);
  return o;
}

// --- 3 ---------------------------------------------------------------------

EncodedExample WordsExample(const std::vector<int> &sizes, int gold, const std::vector<int> &cands) {
  EncodedExample ex;
  int t = 0;
  for (size_t w = 0; w < sizes.size(); ++w) {
    ex.alignment.word_to_tokens.push_back({t, t + sizes[w]});
    for (int k = 0; k < sizes[w]; ++k) ex.alignment.token_word.push_back(static_cast<int>(w));
    t += sizes[w];
  }
  ex.alignment.total_tokens = t;
  ex.x = Eigen::MatrixXd::Zero(t, 3);
  ex.y.assign(t, 0);
  ex.candidate_mask.assign(t, 0);
  ex.anaphor_word = static_cast<int>(sizes.size()) - 1;
  ex.gold_word = gold;
  ex.candidate_words = cands;
  for (int c : cands)
    for (int k = ex.alignment.word_to_tokens[c].begin; k < ex.alignment.word_to_tokens[c].end; ++k)
      ex.candidate_mask[k] = 1;
  return ex;
}

// Rank of the gold word by counting the words that beat it.
double BruteReciprocalRank(const std::vector<int> &sizes, const std::vector<double> &tokens,
                           int gold, const std::vector<int> &rankable, int anaphor) {
  std::vector<double> word(sizes.size(), -INFINITY);
  int t = 0;
  for (size_t w = 0; w < sizes.size(); ++w)
    for (int k = 0; k < sizes[w]; ++k) word[w] = std::max(word[w], tokens[t++]);
  if (std::find(rankable.begin(), rankable.end(), gold) == rankable.end()) return 0.0;
  int rank = 1;
  for (int w : rankable) {
    if (w == gold) continue;
    const int dw = std::abs(w - anaphor), dg = std::abs(gold - anaphor);
    if (word[w] > word[gold] || (word[w] == word[gold] && (dw < dg || (dw == dg && w < gold))))
      ++rank;
  }
  return 1.0 / rank;
}

Outcome MrrOracle() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VariantFlags mask;
  mask.mask = true;
  for (int f = 0; f < kMrrFixtures && o.pass; ++f) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const bool masked = f % 2 == 1;
    std::vector<RankedPrediction> preds;
    double expect = 0.0;
    for (int i = 0; i < n; ++i) {
      const int words = 2 + static_cast<int>(rng() % 7);
      std::vector<int> sizes(words);
      for (int &s : sizes) s = 1 + static_cast<int>(rng() % 4);
      std::vector<int> cands, all;
      for (int w = 0; w + 1 < words; ++w) {
        all.push_back(w);
        if (rng() % 2) cands.push_back(w);
      }
      if (cands.empty()) cands.push_back(0);
      const int gold = static_cast<int>(rng() % (words - 1));
      EncodedExample ex = WordsExample(sizes, gold, cands);
      std::vector<double> tokens(ex.alignment.total_tokens);
      for (double &v : tokens) v = f % 3 == 0 ? std::round(u(rng) * 4) / 4 : u(rng);
      expect += BruteReciprocalRank(sizes, tokens, gold, masked ? cands : all, words - 1);
      ScoreSequence s;
      s.scores = tokens;
      preds.push_back(RankPrediction(ex, s, masked ? mask : VariantFlags{}));
    }
    const double got = Mrr(preds);
    o.Require(std::abs(got - expect / n) <= kMrrTolerance, Format("fixture %.0f: %.15f vs %.15f", f, got, expect / n));
  }
  std::vector<RankedPrediction> example(3);
  example[0].rank_of_gold = 1;
  example[1].rank_of_gold = 2;
  example[2].rank_of_gold = 4;
  const double v = Mrr(example);
  o.Require(v == (1.0 + 0.5 + 0.25) / 3.0, Format("ranks [1,2,4] gave %.9f", v));
  o.Require(std::round(v * 1e6) / 1e6 == 0.583333, Format("ranks [1,2,4] gave %.9f", v));
  if (o.pass) o.detail = Format("%.0f fixtures within 1e-12, [1,2,4] -> %.6f", kMrrFixtures, v);
  return o;
}

// --- 4 ---------------------------------------------------------------------

// Lexicon-backed pipeline over a synthetic corpus written under `dir`.
RunConfig SynthConfig(const SynthCorpus &corpus, const TempDir &dir, uint64_t seed) {
  WriteSynthCorpus(corpus, dir.path());
  RunConfig c;
  c.corpus_dir = dir / "corpus";
  c.lexicon = dir / "lexicon.json";
  c.out_dir = dir / "out";
  c.taggers = {"lexicon", "corpus"};
  c.analyzer = "lexicon";
  c.provider.name = "stub";
  c.provider.stub.dim = 32;
  c.SetSeed(seed);
  return c;
}

std::vector<MetricsReport> g_reports;

Outcome OverfitConvergence() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  SynthOptions so;
  so.docs = 20;
  so.seed = 1;
  SynthCorpus corpus = GenerateSynthCorpus(so);
  TempDir dir;
  RunConfig c = SynthConfig(corpus, dir, 1);
  c.training.hidden = 32;
  c.training.max_epochs = 200;
  o.Require(c.training.learning_rate == 0.005 && c.training.batch_size == 16 &&
                c.training.patience == 5,
            "training defaults differ from the published settings");
  Pipeline pipeline(c, corpus.docs);
  const VariantFlags base;
  PreparedSet train = Prepare(corpus.docs, pipeline, base);
  TrainResult r = Train(train.Examples(), train.Examples(), c.training);
  Evaluation ev = Evaluate(train, Seq2SeqScorer(r.params, base), "seq2seq", base, "train");
  g_reports.push_back(ev.report);
  const double t = Seconds(start);
  o.Require(ev.report.mrr >= kOverfitMrr, Format("train MRR %.4f", ev.report.mrr));
  o.Require(t < kOverfitBudgetSeconds, Format("took %.1fs", t));
  if (o.pass)
    o.detail = Format("train MRR %.4f after %.0f epochs, %.1fs", ev.report.mrr,
                      static_cast<double>(r.log.epochs.size()), t);
  return o;
}

// --- 5 ---------------------------------------------------------------------

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome VariantOrdering() {
  Outcome o;
  std::vector<double> base, mask, filter;
  for (uint64_t seed : {1, 2, 3}) {
    SynthOptions so;
    so.docs = 200;
    so.seed = seed;
    so.ambiguity = 0.5;
    so.unmarked_rate = 0.3;
    so.lead_sentences = 2;
    so.nouns_per_sentence = 3;
    SynthCorpus corpus = GenerateSynthCorpus(so);
    TempDir dir;
    RunConfig c = SynthConfig(corpus, dir, seed);
    c.training.hidden = 32;
    c.models = {"seq2seq"};
    c.variants = {ParseVariant("base"), ParseVariant("mask"), ParseVariant("filter")};
    ExperimentResult r = RunExperiment(corpus.docs, c);
    o.Require(r.failures.empty() && r.reports.size() == 3, "experiment cell failed");
    if (!o.pass) return o;
    base.push_back(r.reports[0].mrr);
    mask.push_back(r.reports[1].mrr);
    filter.push_back(r.reports[2].mrr);
    g_reports.insert(g_reports.end(), r.reports.begin(), r.reports.end());
  }
  const double b = Median(base), m = Median(mask), f = Median(filter);
  o.Require(f >= m && m >= b, Format("median MRR filter %.4f, mask %.4f, base %.4f", f, m, b));
  if (o.pass) o.detail = Format("median MRR filter %.4f >= mask %.4f >= base %.4f", f, m, b);
  return o;
}

// --- 6 ---------------------------------------------------------------------

FeatureVector RandomFeatures(std::mt19937_64 &rng) {
  FeatureVector v{};
  for (int j = 0; j < 3; ++j) v[j] = static_cast<double>(rng() % 2);
  v[3] = static_cast<double>(rng() % 5);
  v[4 + rng() % 4] = 1.0;
  return v;
}

double BruteKnn(const LabeledTokens &data, const FeatureVector &q, int k) {
  std::vector<std::pair<double, size_t>> d;
  for (size_t i = 0; i < data.x.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < kNumFeatures; ++j) s += (data.x[i][j] - q[j]) * (data.x[i][j] - q[j]);
    d.push_back({s, i});
  }
  std::sort(d.begin(), d.end());
  int pos = 0;
  for (int i = 0; i < k; ++i) pos += data.y[d[i].second];
  return static_cast<double>(pos) / k;
}

Outcome BaselineOracle() {
  Outcome o;
  std::mt19937_64 rng(404);
  for (int s = 0; s < kKnnFeatureSets && o.pass; ++s) {
    LabeledTokens data;
    const int n = 40 + static_cast<int>(rng() % 80);
    for (int i = 0; i < n; ++i) {
      data.x.push_back(RandomFeatures(rng));
      data.y.push_back(rng() % 3 == 0);
    }
    const int k = 10 + static_cast<int>(rng() % 21);
    BaselineModel m = FitKnn(data, k);
    for (int q = 0; q < 5; ++q) {
      FeatureVector v = RandomFeatures(rng);
      o.Require(m.ScoreToken(v) == BruteKnn(data, v, k), Format("set %.0f query %.0f", s, q));
    }
    if (s % 20 == 0) {
      data.y[0] = 1;
      data.y[1] = 0;
      BaselineModel searched = Fit(data, BaselineKind::kKnn);
      o.Require(searched.k >= 10 && searched.k <= 30 && searched.k_scores.size() == 21,
                Format("k search chose %.0f over %.0f values", searched.k,
                       static_cast<double>(searched.k_scores.size())));
    }
  }
  if (o.pass) o.detail = Format("%.0f feature sets exact, k search over [10,30]", kKnnFeatureSets);
  return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome PipelineIntegrity() {
  Outcome o;
  TempDir dir;
  Document doc = ConvertXmlFile(DataDir() / "xml" / "school.xml");
  SaveDocument(doc, dir / "school.json");
  Document loaded = LoadDocument(dir / "school.json", false);
  o.Require(loaded == doc, "loaded document differs from converted document");
  o.Require(ParseDocumentJson(SerializeDocument(loaded), "school", false) == doc,
            "serialized form does not round-trip");
  o.Require(SerializeDocument(loaded) == SerializeDocument(doc), "serialization not stable");

  SynthOptions so;
  so.docs = 59;
  so.ambiguity = 0.3;
  SynthCorpus corpus = GenerateSynthCorpus(so);
  std::vector<Document> all = corpus.docs;
  all.push_back(doc);
  for (const Document &d : all) {
    Document once = CleanDocument(d).first;
    o.Require(CleanDocument(once).first == once, "cleaning " + d.doc_id + " is not idempotent");
  }
  DocumentSplit split = SplitDocuments(corpus.docs, 0.7, 1);
  std::set<std::string> train;
  for (const Document &d : split.train) train.insert(d.doc_id);
  bool disjoint = true;
  for (const Document &d : split.test) disjoint = disjoint && !train.count(d.doc_id);
  o.Require(split.train.size() == 41 && split.test.size() == 18 && disjoint,
            Format("split %.0f/%.0f", static_cast<double>(split.train.size()),
                   static_cast<double>(split.test.size())));
  if (o.pass) o.detail = "round trip identical, cleaning idempotent on 60 docs, split 41/18 disjoint";
  return o;
}

// --- 8 ---------------------------------------------------------------------

Outcome MetricsIdentity() {
  Outcome o;
  MetricsReport illus = Aggregate({5, 5, 5, 985}, {}, "illustration", {}, "fixed");
  o.Require(illus.accuracy == 0.990 && illus.f1 == 0.5,
            Format("accuracy %.6f, f1 %.6f", illus.accuracy, illus.f1));
  std::vector<MetricsReport> reports = g_reports;
  reports.push_back(illus);
  for (const MetricsReport &r : reports) {
    const double p = r.precision, q = r.recall;
    const double f1 = p + q > 0 ? 2 * p * q / (p + q) : 0.0;
    const double acc = static_cast<double>(r.counts.tp + r.counts.tn) / r.counts.total();
    o.Require(std::abs(r.f1 - f1) <= kIdentityTolerance && std::abs(r.accuracy - acc) <= kIdentityTolerance,
              r.model + "/" + VariantName(r.variant) + " breaks an identity");
  }
  if (o.pass)
    o.detail = Format("identities hold on %.0f reports, 5/5/5/985 -> accuracy %.3f, f1 %.1f",
                      static_cast<double>(reports.size()), illus.accuracy, illus.f1);
  return o;
}

}  // namespace
}  // namespace pronres

int main() {
  using pronres::Outcome;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, pronres::GradientCorrectness}, {2, pronres::MaskLaw},
      {3, pronres::MrrOracle},           {4, pronres::OverfitConvergence},
      {5, pronres::VariantOrdering},     {6, pronres::BaselineOracle},
      {7, pronres::PipelineIntegrity},   {8, pronres::MetricsIdentity}};
  int failed = 0;
  for (const auto &[n, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
