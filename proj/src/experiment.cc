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


#include "pronres/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pronres/error.h"
#include "pronres/random.h"

namespace pronres {

using nlohmann::json;
using nlohmann::ordered_json;

VariantFlags ParseVariant(std::string_view name) {
  if (name == "base") return {false, false, false};
  if (name == "append") return {true, false, false};
  if (name == "mask") return {true, true, false};
  if (name == "filter") return {true, true, true};
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected base, append, mask or filter)");
}

std::vector<VariantFlags> StandardVariants() {
  return {ParseVariant("base"), ParseVariant("append"), ParseVariant("mask"),
          ParseVariant("filter")};
}

// ---------------------------------------------------------------------------
// Configuration.

namespace {

const std::set<std::string> kModels = {"seq2seq", "knn", "max_margin", "logistic"};

const char *WindowName(WindowPolicy w) {
  return w == WindowPolicy::kIncludeAnaphorSentencePrefix ? "include_prefix" : "exclude_sentence";
}

WindowPolicy ParseWindow(const std::string &s) {
  if (s == "include_prefix") return WindowPolicy::kIncludeAnaphorSentencePrefix;
  if (s == "exclude_sentence") return WindowPolicy::kExcludeAnaphorSentence;
  throw ConfigError("unknown candidate window '" + s + "'");
}

const char *PolicyName(TaggerPolicy p) {
  return p == TaggerPolicy::kIntersection ? "intersection" : "union";
}

TaggerPolicy ParsePolicy(const std::string &s) {
  if (s == "intersection") return TaggerPolicy::kIntersection;
  if (s == "union") return TaggerPolicy::kUnion;
  throw ConfigError("unknown tagger policy '" + s + "'");
}

void CheckKeys(const json &j, const std::string &where, std::initializer_list<const char *> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto &[key, value] : j.items()) {
    bool known = false;
    for (const char *k : keys) known = known || key == k;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

VariantFlags VariantFromJson(const json &j) {
  if (j.is_string()) return ParseVariant(j.get<std::string>());
  CheckKeys(j, "variant", {"append", "mask", "filter"});
  VariantFlags v;
  v.append = j.value("append", false);
  v.mask = j.value("mask", false);
  v.filter = j.value("filter", false);
  return v;
}

ordered_json VariantJson(const VariantFlags &v) {
  return {{"append", v.append}, {"mask", v.mask}, {"filter", v.filter}};
}

std::filesystem::path Resolve(const std::filesystem::path &base, const std::string &p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

RunConfig RunConfig::FromJson(std::string_view text, const std::filesystem::path &base_dir) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  c.out_dir = Resolve(base_dir, c.out_dir.string());
  try {
    CheckKeys(j, "config",
              {"paths", "provider", "taggers", "analyzer", "candidates", "training", "variant",
               "variants", "models", "split", "knn", "seed"});
    if (j.contains("paths")) {
      const json &p = j["paths"];
      CheckKeys(p, "paths", {"corpus", "lexicon", "out"});
      if (p.contains("corpus")) c.corpus_dir = Resolve(base_dir, p["corpus"].get<std::string>());
      if (p.contains("lexicon") && !p["lexicon"].is_null())
        c.lexicon = Resolve(base_dir, p["lexicon"].get<std::string>());
      if (p.contains("out")) c.out_dir = Resolve(base_dir, p["out"].get<std::string>());
    }
    if (!j.contains("provider")) throw ConfigError("config needs a provider block with a name");
    const json &pj = j["provider"];
    CheckKeys(pj, "provider",
              {"name", "dim", "max_tokens", "seed", "split_affixes", "max_piece", "markers"});
    if (!pj.contains("name") || !pj["name"].is_string() || pj["name"].get<std::string>().empty())
      throw ConfigError("provider.name is required");
    c.provider.name = pj["name"].get<std::string>();
    StubProviderOptions &s = c.provider.stub;
    s.dim = pj.value("dim", s.dim);
    s.max_tokens = pj.value("max_tokens", s.max_tokens);
    s.seed = pj.value("seed", s.seed);
    s.split_affixes = pj.value("split_affixes", s.split_affixes);
    s.max_piece = pj.value("max_piece", s.max_piece);
    s.markers = pj.value("markers", s.markers);
    if (j.contains("taggers")) c.taggers = j["taggers"].get<std::vector<std::string>>();
    if (j.contains("analyzer")) c.analyzer = j["analyzer"].get<std::string>();
    if (j.contains("candidates")) {
      const json &cj = j["candidates"];
      CheckKeys(cj, "candidates", {"window", "policy"});
      if (cj.contains("window")) c.candidates.window = ParseWindow(cj["window"].get<std::string>());
      if (cj.contains("policy")) c.candidates.policy = ParsePolicy(cj["policy"].get<std::string>());
    }
    if (j.contains("training")) {
      const json &t = j["training"];
      CheckKeys(t, "training",
                {"learning_rate", "batch_size", "max_epochs", "patience", "hidden", "seed"});
      c.training.learning_rate = t.value("learning_rate", c.training.learning_rate);
      c.training.batch_size = t.value("batch_size", c.training.batch_size);
      c.training.max_epochs = t.value("max_epochs", c.training.max_epochs);
      c.training.patience = t.value("patience", c.training.patience);
      c.training.hidden = t.value("hidden", c.training.hidden);
      c.training.seed = t.value("seed", c.training.seed);
    }
    if (j.contains("variant")) c.training.variant = VariantFromJson(j["variant"]);
    if (j.contains("variants")) {
      c.variants.clear();
      for (const json &v : j["variants"]) c.variants.push_back(VariantFromJson(v));
    }
    if (j.contains("models")) c.models = j["models"].get<std::vector<std::string>>();
    if (j.contains("split")) {
      const json &sj = j["split"];
      CheckKeys(sj, "split", {"ratio", "dev_fraction"});
      c.split_ratio = sj.value("ratio", c.split_ratio);
      c.dev_fraction = sj.value("dev_fraction", c.dev_fraction);
    }
    if (j.contains("knn")) {
      const json &kj = j["knn"];
      CheckKeys(kj, "knn", {"k_min", "k_max", "folds"});
      c.knn.k_min = kj.value("k_min", c.knn.k_min);
      c.knn.k_max = kj.value("k_max", c.knn.k_max);
      c.knn.folds = kj.value("folds", c.knn.folds);
    }
    const uint64_t seed = j.value("seed", c.seed);
    const bool training_seed = j.contains("training") && j["training"].contains("seed");
    const uint64_t tseed = c.training.seed;
    c.SetSeed(seed);
    if (training_seed) c.training.seed = tseed;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str(), path.parent_path());
}

std::string RunConfig::ToJson() const {
  ordered_json j;
  j["paths"] = {{"corpus", corpus_dir.string()},
                {"lexicon", lexicon ? ordered_json(lexicon->string()) : ordered_json(nullptr)},
                {"out", out_dir.string()}};
  j["provider"] = {{"name", provider.name},
                   {"dim", provider.stub.dim},
                   {"max_tokens", provider.stub.max_tokens},
                   {"seed", provider.stub.seed},
                   {"split_affixes", provider.stub.split_affixes},
                   {"max_piece", provider.stub.max_piece},
                   {"markers", provider.stub.markers}};
  j["taggers"] = taggers;
  j["analyzer"] = analyzer;
  j["candidates"] = {{"window", WindowName(candidates.window)},
                     {"policy", PolicyName(candidates.policy)}};
  j["training"] = {{"learning_rate", training.learning_rate},
                   {"batch_size", training.batch_size},
                   {"max_epochs", training.max_epochs},
                   {"patience", training.patience},
                   {"hidden", training.hidden},
                   {"seed", training.seed}};
  j["variant"] = VariantJson(training.variant);
  j["variants"] = ordered_json::array();
  for (const VariantFlags &v : variants) j["variants"].push_back(VariantJson(v));
  j["models"] = models;
  j["split"] = {{"ratio", split_ratio}, {"dev_fraction", dev_fraction}};
  j["knn"] = {{"k_min", knn.k_min}, {"k_max", knn.k_max}, {"folds", knn.folds}};
  j["seed"] = seed;
  return j.dump(2);
}

void RunConfig::SetSeed(uint64_t s) {
  seed = s;
  training.seed = s;
  knn.seed = s;
}

void RunConfig::Validate() const {
  if (provider.name.empty()) throw ConfigError("provider.name is required");
  MakeProvider(provider);
  training.Validate();
  if (taggers.empty()) throw ConfigError("at least one tagger is required");
  auto registered_taggers = RegisteredTaggers();
  for (const std::string &t : taggers) {
    if (std::find(registered_taggers.begin(), registered_taggers.end(), t) ==
        registered_taggers.end())
      throw ConfigError("unknown tagger '" + t + "'");
  }
  auto registered_analyzers = RegisteredAnalyzers();
  if (std::find(registered_analyzers.begin(), registered_analyzers.end(), analyzer) ==
      registered_analyzers.end())
    throw ConfigError("unknown analyzer '" + analyzer + "'");
  const bool needs_lexicon = analyzer == "lexicon" ||
                             std::find(taggers.begin(), taggers.end(), "lexicon") != taggers.end();
  if (needs_lexicon && !lexicon) throw ConfigError("the lexicon tagger/analyzer needs paths.lexicon");
  if (lexicon && !std::filesystem::is_regular_file(*lexicon))
    throw ConfigError("lexicon file not found: " + lexicon->string());
  if (!corpus_dir.empty() && !std::filesystem::is_directory(corpus_dir))
    throw ConfigError("corpus directory not found: " + corpus_dir.string());
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("split.ratio must lie in (0, 1)");
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0))
    throw ConfigError("split.dev_fraction must lie in (0, 1)");
  if (models.empty()) throw ConfigError("models must not be empty");
  for (const std::string &m : models) {
    if (!kModels.count(m)) throw ConfigError("unknown model '" + m + "'");
  }
  if (variants.empty()) throw ConfigError("variants must not be empty");
  if (knn.k_min <= 0 || knn.k_max < knn.k_min) throw ConfigError("invalid knn k range");
  if (knn.folds < 2) throw ConfigError("knn.folds must be at least 2");
}

std::string RunConfig::PipelineJson() const {
  ordered_json j;
  j["taggers"] = taggers;
  j["analyzer"] = analyzer;
  j["lexicon"] = lexicon ? ordered_json(lexicon->string()) : ordered_json(nullptr);
  j["corpus"] = corpus_dir.string();
  j["candidates"] = {{"window", WindowName(candidates.window)},
                     {"policy", PolicyName(candidates.policy)}};
  return j.dump();
}

void RunConfig::ApplyPipelineJson(std::string_view text) {
  try {
    json j = json::parse(text.begin(), text.end());
    if (j.contains("taggers")) taggers = j["taggers"].get<std::vector<std::string>>();
    if (j.contains("analyzer")) analyzer = j["analyzer"].get<std::string>();
    if (j.contains("lexicon"))
      lexicon = j["lexicon"].is_null()
                    ? std::nullopt
                    : std::optional<std::filesystem::path>(j["lexicon"].get<std::string>());
    if (j.contains("corpus")) corpus_dir = j["corpus"].get<std::string>();
    if (j.contains("candidates")) {
      candidates.window = ParseWindow(j["candidates"].value("window", "include_prefix"));
      candidates.policy = ParsePolicy(j["candidates"].value("policy", "intersection"));
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("checkpoint pipeline settings: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Pipeline.

Pipeline::Pipeline(const RunConfig &config, const std::vector<Document> &corpus)
    : candidates_(config.candidates) {
  ComponentContext ctx{config.lexicon, &corpus};
  for (const std::string &name : config.taggers) {
    taggers_.push_back(MakeTagger(name, ctx));
    tagger_ptrs_.push_back(taggers_.back().get());
  }
  if (tagger_ptrs_.empty()) throw ConfigError("at least one tagger is required");
  analyzer_ = MakeAnalyzer(config.analyzer, ctx);
  provider_ = MakeProvider(config.provider);
}

std::vector<EncodedExample> PreparedSet::Examples() const {
  std::vector<EncodedExample> out;
  out.reserve(items.size());
  for (const PreparedExample &p : items) out.push_back(p.example);
  return out;
}

PreparedSet Prepare(const std::vector<Document> &docs, const Pipeline &pipeline,
                    const VariantFlags &variant) {
  PreparedSet set;
  for (const Document &doc : docs) {
    InstanceAudit audit;
    std::vector<ResolutionInstance> instances =
        BuildInstances(doc, pipeline.taggers(), pipeline.analyzer(), pipeline.candidates(), &audit);
    set.audit.instances += audit.instances;
    set.audit.gold_not_candidate += audit.gold_not_candidate;
    set.audit.gold_not_nominal += audit.gold_not_nominal;
    set.audit.unresolved += audit.unresolved;
    for (const ResolutionInstance &raw : instances) {
      if (!raw.gold) {
        ++set.skipped_no_gold;
        continue;
      }
      std::optional<ResolutionInstance> fitted =
          FitToBudget(WithVariantCandidates(raw, variant), pipeline.provider(), &set.window);
      if (!fitted) continue;
      PreparedExample p;
      p.instance = std::move(*fitted);
      p.example = Assemble(p.instance, pipeline.provider(), variant.append);
      p.features = Featurize(p.instance, p.example.alignment, pipeline.analyzer());
      set.items.push_back(std::move(p));
    }
  }
  return set;
}

// ---------------------------------------------------------------------------
// Splits.

namespace {

std::vector<std::string> Ids(const std::vector<Document> &docs) {
  std::vector<std::string> ids;
  for (const Document &d : docs) ids.push_back(d.doc_id);
  return ids;
}

uint64_t Fnv1a(std::string_view s, uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::vector<std::string> ExperimentSplit::TrainDocIds() const {
  std::vector<std::string> ids = Ids(train);
  for (const Document &d : dev) ids.push_back(d.doc_id);
  return ids;
}

std::vector<std::string> ExperimentSplit::TestDocIds() const { return Ids(test); }

ExperimentSplit MakeSplit(const std::vector<Document> &docs, const RunConfig &config) {
  DocumentSplit outer = SplitDocuments(docs, config.split_ratio, config.seed);
  ExperimentSplit split;
  split.test = std::move(outer.test);
  const int n = static_cast<int>(outer.train.size());
  if (n < 2) throw UsageError("need at least 2 training documents to hold out a dev set");
  int n_dev = std::max<int>(1, static_cast<int>(std::llround(config.dev_fraction * n)));
  n_dev = std::min(n_dev, n - 1);
  std::vector<size_t> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Rng rng(Mix64(config.seed ^ 0x646576ULL));
  rng.Shuffle(order);
  std::vector<bool> is_dev(n, false);
  for (int i = 0; i < n_dev; ++i) is_dev[order[i]] = true;
  for (int i = 0; i < n; ++i) (is_dev[i] ? split.dev : split.train).push_back(outer.train[i]);

  uint64_t h = Fnv1a(std::to_string(config.seed));
  for (const Document &d : split.test) h = Fnv1a(d.doc_id, Fnv1a("|", h));
  char id[64];
  std::snprintf(id, sizeof(id), "seed%llu-r%.2f-%08llx",
                static_cast<unsigned long long>(config.seed), config.split_ratio,
                static_cast<unsigned long long>(h & 0xffffffffULL));
  split.id = id;
  return split;
}

// ---------------------------------------------------------------------------
// Evaluation.

Scorer Seq2SeqScorer(const ModelParameters &params, const VariantFlags &variant) {
  return [&params, variant](const PreparedExample &p) {
    return Predict(p.example, params, variant);
  };
}

Scorer BaselineScorer(const BaselineModel &model, const VariantFlags &variant) {
  return [&model, variant](const PreparedExample &p) {
    return ScoreExample(model, p.features, p.example, variant);
  };
}

namespace {

ordered_json WordRecord(const PreparedExample &p, int word, const std::vector<double> &scores) {
  if (word < 0) return nullptr;
  const WordLocation loc = p.instance.word_location[word];
  return {{"index", word},
          {"word", p.instance.paragraph[word].surface},
          {"sentence", loc.sentence},
          {"position", loc.word},
          {"score", scores[word]}};
}

}  // namespace

Evaluation Evaluate(const PreparedSet &set, const Scorer &scorer, const std::string &model,
                    const VariantFlags &variant, const std::string &split) {
  Evaluation ev;
  TokenCounts counts;
  for (const PreparedExample &p : set.items) {
    ScoreSequence s = scorer(p);
    counts += ExampleTokenMetrics(p.example, s);
    RankedPrediction r = RankPrediction(p.example, s, variant);
    const int predicted = r.ranking.empty() ? -1 : r.ranking.front();
    if (predicted != r.gold_word) {
      std::vector<double> word_scores = WordScores(s.scores, p.example.alignment);
      ordered_json rec;
      rec["model"] = model;
      rec["variant"] = VariantName(variant);
      rec["split"] = split;
      rec["instance"] = p.instance.id;
      rec["anaphor"] = p.instance.paragraph[p.instance.anaphor].surface;
      rec["gold"] = WordRecord(p, r.gold_word, word_scores);
      rec["predicted"] = WordRecord(p, predicted, word_scores);
      rec["rank_of_gold"] = r.rank_of_gold ? ordered_json(*r.rank_of_gold) : ordered_json(nullptr);
      ordered_json agreement = nullptr;
      for (const Candidate &c : p.instance.candidates) {
        if (p.instance.ParagraphIndex(c.location) == predicted) {
          agreement = {{"gender", GenderCompatible(c.morph.gender, p.instance.anaphor_morph.gender)},
                       {"number", NumberCompatible(c.morph.number, p.instance.anaphor_morph.number)}};
        }
      }
      rec["predicted_is_candidate"] = !agreement.is_null();
      rec["agreement"] = agreement;
      ev.false_positives_jsonl += rec.dump();
      ev.false_positives_jsonl += '\n';
    }
    ev.predictions.push_back(std::move(r));
  }
  ev.report = Aggregate(counts, ev.predictions, model, variant, split);
  return ev;
}

// ---------------------------------------------------------------------------
// Experiment matrix.

ExperimentResult RunExperiment(const std::vector<Document> &docs, const RunConfig &config) {
  config.Validate();
  ExperimentSplit split = MakeSplit(docs, config);
  Pipeline pipeline(config, docs);
  ExperimentResult result;
  result.split_id = split.id;
  std::vector<Document> fit_docs = split.train;
  fit_docs.insert(fit_docs.end(), split.dev.begin(), split.dev.end());

  for (const VariantFlags &variant : config.variants) {
    std::optional<PreparedSet> train, dev, fit, test;
    for (const std::string &model : config.models) {
      try {
        if (!test) test = Prepare(split.test, pipeline, variant);
        Evaluation ev;
        if (model == "seq2seq") {
          if (!train) train = Prepare(split.train, pipeline, variant);
          if (!dev) dev = Prepare(split.dev, pipeline, variant);
          TrainingConfig tc = config.training;
          tc.variant = variant;
          TrainResult tr = Train(train->Examples(), dev->Examples(), tc);
          ev = Evaluate(*test, Seq2SeqScorer(tr.params, variant), model, variant, split.id);
          result.logs.push_back(std::move(tr.log));
        } else {
          if (!fit) fit = Prepare(fit_docs, pipeline, variant);
          LabeledTokens data;
          for (const PreparedExample &p : fit->items) data.Append(p.features, p.example);
          BaselineModel bm = Fit(data, ParseBaselineKind(model), config.knn);
          ev = Evaluate(*test, BaselineScorer(bm, variant), model, variant, split.id);
        }
        ev.report.train_docs = split.TrainDocIds();
        ev.report.test_docs = split.TestDocIds();
        result.reports.push_back(std::move(ev.report));
        result.error_analysis_jsonl += ev.false_positives_jsonl;
      } catch (const Error &e) {
        result.failures.push_back({model, variant, e.code(), e.what()});
      }
    }
  }
  return result;
}

std::vector<Document> LoadCleanCorpus(const RunConfig &config, CleaningStats *stats) {
  if (config.corpus_dir.empty()) throw ConfigError("paths.corpus is required");
  std::vector<Document> docs = LoadCorpus(config.corpus_dir, true);
  CleaningStats total;
  for (Document &d : docs) {
    auto [clean, s] = CleanDocument(d);
    d = std::move(clean);
    total += s;
  }
  if (stats) *stats = total;
  return docs;
}

}  // namespace pronres
