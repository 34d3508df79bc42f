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


#include "pronres/pronres.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pronres/baselines.h"
#include "pronres/candidates.h"
#include "pronres/corpus.h"
#include "pronres/encoding.h"
#include "pronres/error.h"
#include "pronres/evaluation.h"
#include "pronres/experiment.h"
#include "pronres/model.h"
#include "pronres/synth.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

struct pronres_config {
  pronres::RunConfig config;
};

struct pronres_model {
  pronres::Checkpoint checkpoint;
  pronres::RunConfig config;
};

namespace {

thread_local std::string last_error;

template <typename F>
int Guard(F &&f) {
  try {
    f();
    last_error.clear();
    return PRONRES_OK;
  } catch (const pronres::Error &e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc &) {
    last_error = "out of memory";
    return PRONRES_ERR_INTERNAL;
  } catch (const std::exception &e) {
    last_error = e.what();
    return PRONRES_ERR_INTERNAL;
  }
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(char **out, const std::string &s) {
  if (out != nullptr) *out = Dup(s);
}

void Require(const void *p, const char *name) {
  if (p == nullptr) throw pronres::UsageError(std::string(name) + " must not be NULL");
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pronres::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw pronres::IoError("write failed for " + path.string());
}

void MakeDirs(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pronres::IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::vector<fs::path> FilesWithExtension(const fs::path &dir, const std::string &ext) {
  if (!fs::is_directory(dir)) throw pronres::IoError("directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext &&
        entry.path().filename().string().front() != '_')
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Converts or cleans every file of a directory, collecting per-file errors.
template <typename Load>
int ProcessDir(const char *in_dir, const char *out_dir, const std::string &ext, Load load,
               char **report_json) {
  int first_failure = PRONRES_OK;
  std::string first_message;
  const int status = Guard([&] {
    Require(in_dir, "input directory");
    Require(out_dir, "output directory");
    std::vector<fs::path> files = FilesWithExtension(in_dir, ext);
    MakeDirs(out_dir);
    pronres::CleaningStats stats;
    ordered_json errors = ordered_json::array();
    int written = 0;
    for (const fs::path &f : files) {
      const int s = Guard([&] {
        auto [doc, st] = pronres::CleanDocument(load(f));
        pronres::SaveDocument(doc, fs::path(out_dir) / (f.stem().string() + ".json"));
        stats += st;
      });
      if (s == PRONRES_OK) {
        ++written;
      } else {
        errors.push_back({{"file", f.string()}, {"status", s}, {"message", last_error}});
        if (first_failure == PRONRES_OK) {
          first_failure = s;
          first_message = f.string() + ": " + last_error;
        }
      }
    }
    const std::string stats_json = pronres::CleaningStatsJson(stats);
    WriteText(fs::path(out_dir) / "_cleaning_stats.json", stats_json + "\n");
    ordered_json report;
    report["files"] = files.size();
    report["written"] = written;
    report["errors"] = errors;
    report["stats"] = ordered_json::parse(stats_json);
    Emit(report_json, report.dump());
  });
  if (status != PRONRES_OK) return status;
  if (first_failure != PRONRES_OK) last_error = first_message;
  return first_failure;
}

std::vector<std::string> DocIds(const std::vector<pronres::Document> &docs) {
  std::vector<std::string> ids;
  for (const auto &d : docs) ids.push_back(d.doc_id);
  return ids;
}

ordered_json VariantJson(const pronres::VariantFlags &v) {
  return {{"append", v.append}, {"mask", v.mask}, {"filter", v.filter}};
}

std::string ReportFileName(const pronres::MetricsReport &r) {
  return r.model + "__" + pronres::VariantName(r.variant) + ".json";
}

}  // namespace

extern "C" {

const char *pronres_version(void) { return "1.0.0"; }

const char *pronres_status_name(int status) {
  switch (status) {
    case PRONRES_OK:
      return "ok";
    case PRONRES_ERR_PARSE:
      return "parse error";
    case PRONRES_ERR_VALIDATION:
      return "validation error";
    case PRONRES_ERR_IO:
      return "i/o error";
    case PRONRES_ERR_CONFIG:
      return "config error";
    case PRONRES_ERR_SHAPE:
      return "shape error";
    case PRONRES_ERR_NUMERIC:
      return "numeric error";
    case PRONRES_ERR_USAGE:
      return "usage error";
    case PRONRES_ERR_ALIGNMENT:
      return "alignment error";
    case PRONRES_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char *pronres_last_error(void) { return last_error.c_str(); }

void pronres_string_free(char *s) { std::free(s); }

int pronres_convert_dir(const char *xml_dir, const char *out_dir, char **report_json) {
  return ProcessDir(
      xml_dir, out_dir, ".xml", [](const fs::path &f) { return pronres::ConvertXmlFile(f); },
      report_json);
}

int pronres_clean_dir(const char *json_dir, const char *out_dir, char **report_json) {
  return ProcessDir(
      json_dir, out_dir, ".json",
      [](const fs::path &f) { return pronres::LoadDocument(f, false); }, report_json);
}

int pronres_split_dir(const char *json_dir, const char *out_dir, double ratio, uint64_t seed,
                      char **report_json) {
  return Guard([&] {
    Require(json_dir, "input directory");
    Require(out_dir, "output directory");
    std::vector<pronres::Document> docs = pronres::LoadCorpus(json_dir, false);
    pronres::DocumentSplit split = pronres::SplitDocuments(docs, ratio, seed);
    const fs::path out(out_dir);
    for (const char *part : {"train", "test"}) {
      const fs::path dir = out / part;
      MakeDirs(dir);
      for (const fs::path &old : FilesWithExtension(dir, ".json")) fs::remove(old);
      for (const auto &d : std::string(part) == "train" ? split.train : split.test)
        pronres::SaveDocument(d, dir / (d.doc_id + ".json"));
    }
    ordered_json j;
    j["ratio"] = ratio;
    j["seed"] = seed;
    j["train"] = DocIds(split.train);
    j["test"] = DocIds(split.test);
    WriteText(out / "_split.json", j.dump() + "\n");
    Emit(report_json, j.dump());
  });
}

int pronres_synth(const char *options_json, const char *out_dir) {
  return Guard([&] {
    Require(out_dir, "output directory");
    pronres::SynthOptions o;
    if (options_json != nullptr) {
      json j;
      try {
        j = json::parse(options_json);
      } catch (const json::parse_error &e) {
        throw pronres::ConfigError(std::string("synth options: ") + e.what());
      }
      if (!j.is_object()) throw pronres::ConfigError("synth options must be a JSON object");
      static const std::set<std::string> keys = {
          "docs",           "seed",           "min_sentences",  "max_sentences",
          "vocab",          "ambiguity",      "agreement_noise", "attached_rate",
          "adjective_rate", "anaphor_rate",   "lead_sentences", "nouns_per_sentence",
          "unmarked_rate"};
      for (const auto &[k, v] : j.items()) {
        if (!keys.count(k)) throw pronres::ConfigError("unknown synth option '" + k + "'");
      }
      try {
        o.docs = j.value("docs", o.docs);
        o.seed = j.value("seed", o.seed);
        o.min_sentences = j.value("min_sentences", o.min_sentences);
        o.max_sentences = j.value("max_sentences", o.max_sentences);
        o.vocab = j.value("vocab", o.vocab);
        o.ambiguity = j.value("ambiguity", o.ambiguity);
        o.agreement_noise = j.value("agreement_noise", o.agreement_noise);
        o.attached_rate = j.value("attached_rate", o.attached_rate);
        o.adjective_rate = j.value("adjective_rate", o.adjective_rate);
        o.anaphor_rate = j.value("anaphor_rate", o.anaphor_rate);
        o.lead_sentences = j.value("lead_sentences", o.lead_sentences);
        o.nouns_per_sentence = j.value("nouns_per_sentence", o.nouns_per_sentence);
        o.unmarked_rate = j.value("unmarked_rate", o.unmarked_rate);
      } catch (const json::exception &e) {
        throw pronres::ConfigError(std::string("synth options: ") + e.what());
      }
    }
    pronres::WriteSynthCorpus(pronres::GenerateSynthCorpus(o), out_dir);
  });
}

int pronres_config_load(const char *path, pronres_config **out) {
  return Guard([&] {
    Require(path, "config path");
    Require(out, "output handle");
    *out = new pronres_config{pronres::RunConfig::Load(path)};
  });
}

int pronres_config_from_json(const char *text, const char *base_dir, pronres_config **out) {
  return Guard([&] {
    Require(text, "config JSON");
    Require(out, "output handle");
    *out = new pronres_config{
        pronres::RunConfig::FromJson(text, base_dir != nullptr ? base_dir : ".")};
  });
}

void pronres_config_free(pronres_config *config) { delete config; }

int pronres_config_set_seed(pronres_config *config, uint64_t seed) {
  return Guard([&] {
    Require(config, "config");
    config->config.SetSeed(seed);
  });
}

int pronres_config_set_out_dir(pronres_config *config, const char *out_dir) {
  return Guard([&] {
    Require(config, "config");
    Require(out_dir, "output directory");
    config->config.out_dir = out_dir;
  });
}

int pronres_config_validate(const pronres_config *config) {
  return Guard([&] {
    Require(config, "config");
    config->config.Validate();
  });
}

int pronres_config_to_json(const pronres_config *config, char **out) {
  return Guard([&] {
    Require(config, "config");
    Emit(out, config->config.ToJson());
  });
}

int pronres_train(const pronres_config *handle, char **summary_json) {
  return Guard([&] {
    Require(handle, "config");
    const pronres::RunConfig &config = handle->config;
    config.Validate();
    std::vector<pronres::Document> docs = pronres::LoadCleanCorpus(config);
    pronres::ExperimentSplit split = pronres::MakeSplit(docs, config);
    pronres::Pipeline pipeline(config, docs);
    const pronres::VariantFlags variant = config.training.variant;
    pronres::PreparedSet train = pronres::Prepare(split.train, pipeline, variant);
    pronres::PreparedSet dev = pronres::Prepare(split.dev, pipeline, variant);
    pronres::TrainResult result =
        pronres::Train(train.Examples(), dev.Examples(), config.training);

    MakeDirs(config.out_dir);
    const fs::path checkpoint = config.out_dir / "checkpoint.json";
    const fs::path log = config.out_dir / "training_log.jsonl";
    pronres::Checkpoint ck;
    ck.params = result.params;
    ck.training = config.training;
    ck.provider = config.provider;
    ck.pipeline_json = config.PipelineJson();
    pronres::SaveCheckpoint(ck, checkpoint);
    WriteText(log, result.log.ToJsonl());

    const pronres::EpochRecord &best = result.log.epochs.at(result.log.best_epoch - 1);
    ordered_json j;
    j["checkpoint"] = checkpoint.string();
    j["log"] = log.string();
    j["split"] = split.id;
    j["variant"] = VariantJson(variant);
    j["train_instances"] = train.items.size();
    j["dev_instances"] = dev.items.size();
    j["epochs"] = result.log.epochs.size();
    j["best_epoch"] = result.log.best_epoch;
    j["early_stopped"] = result.log.early_stopped;
    j["dev_loss"] = best.dev_loss;
    j["dev_mrr"] = best.dev_mrr;
    Emit(summary_json, j.dump());
  });
}

int pronres_evaluate(const pronres_config *handle, const char *const *checkpoints,
                     size_t num_checkpoints, char **summary_json) {
  int cell_status = PRONRES_OK;
  std::string cell_message;
  const int status = Guard([&] {
    Require(handle, "config");
    if (num_checkpoints > 0) Require(checkpoints, "checkpoint list");
    const pronres::RunConfig &config = handle->config;
    config.Validate();
    std::vector<pronres::Document> docs = pronres::LoadCleanCorpus(config);

    std::vector<pronres::MetricsReport> reports;
    std::vector<std::string> names;
    std::string errors;
    ordered_json failures = ordered_json::array();
    std::string split_id;
    if (num_checkpoints == 0) {
      pronres::ExperimentResult r = pronres::RunExperiment(docs, config);
      split_id = r.split_id;
      for (const auto &rep : r.reports) names.push_back(ReportFileName(rep));
      reports = std::move(r.reports);
      errors = std::move(r.error_analysis_jsonl);
      for (const auto &f : r.failures) {
        failures.push_back({{"model", f.model},
                            {"variant", VariantJson(f.variant)},
                            {"status", static_cast<int>(f.code)},
                            {"message", f.message}});
        if (cell_status == PRONRES_OK) {
          cell_status = static_cast<int>(f.code);
          cell_message = f.model + "/" + pronres::VariantName(f.variant) + ": " + f.message;
        }
      }
    } else {
      pronres::ExperimentSplit split = pronres::MakeSplit(docs, config);
      split_id = split.id;
      pronres::Pipeline pipeline(config, docs);
      for (size_t i = 0; i < num_checkpoints; ++i) {
        Require(checkpoints[i], "checkpoint path");
        pronres::Checkpoint ck = pronres::LoadCheckpoint(checkpoints[i]);
        const int expected = pipeline.provider().dim() + 2;
        if (ck.params.input_dim != expected) {
          throw pronres::ShapeError(
              std::string(checkpoints[i]) + ": checkpoint input dimension " +
              std::to_string(ck.params.input_dim) + " (provider dim " +
              std::to_string(ck.params.input_dim - 2) + ") does not match provider '" +
              config.provider.name + "' with dim " + std::to_string(pipeline.provider().dim()));
        }
        const pronres::VariantFlags variant = ck.training.variant;
        pronres::PreparedSet test = pronres::Prepare(split.test, pipeline, variant);
        pronres::Evaluation ev = pronres::Evaluate(
            test, pronres::Seq2SeqScorer(ck.params, variant), "seq2seq", variant, split.id);
        ev.report.train_docs = split.TrainDocIds();
        ev.report.test_docs = split.TestDocIds();
        reports.push_back(std::move(ev.report));
        names.push_back(fs::path(checkpoints[i]).stem().string() + ".json");
        errors += ev.false_positives_jsonl;
      }
    }

    const fs::path reports_dir = config.out_dir / "reports";
    MakeDirs(reports_dir);
    ordered_json all = ordered_json::array();
    for (size_t i = 0; i < reports.size(); ++i) {
      const std::string text = reports[i].ToJson();
      WriteText(reports_dir / names[i], text + "\n");
      all.push_back(ordered_json::parse(text));
    }
    WriteText(config.out_dir / "metrics.json", all.dump(2) + "\n");
    WriteText(config.out_dir / "error_analysis.jsonl", errors);
    ordered_json j;
    j["split"] = split_id;
    j["reports"] = all;
    j["failures"] = failures;
    j["out"] = config.out_dir.string();
    Emit(summary_json, j.dump());
  });
  if (status != PRONRES_OK) return status;
  if (cell_status != PRONRES_OK) last_error = cell_message;
  return cell_status;
}

int pronres_model_load(const char *checkpoint_path, pronres_model **out) {
  return Guard([&] {
    Require(checkpoint_path, "checkpoint path");
    Require(out, "output handle");
    auto model = std::make_unique<pronres_model>();
    model->checkpoint = pronres::LoadCheckpoint(checkpoint_path);
    model->config.provider = model->checkpoint.provider;
    model->config.training = model->checkpoint.training;
    model->config.ApplyPipelineJson(model->checkpoint.pipeline_json);
    *out = model.release();
  });
}

void pronres_model_free(pronres_model *model) { delete model; }

int pronres_predict(const pronres_model *model, const char *document_json, char **ranking_json) {
  return Guard([&] {
    Require(model, "model");
    Require(document_json, "document JSON");
    json j;
    try {
      j = json::parse(document_json);
    } catch (const json::parse_error &e) {
      throw pronres::ParseError(std::string("input: ") + e.what());
    }
    if (!j.is_object() || !j.contains("sentences"))
      throw pronres::ValidationError("input: expected {\"sentences\": [...]}");
    if (!j.contains("doc_id")) j["doc_id"] = "input";
    int anaphors = 0;
    for (auto &sentence : j["sentences"]) {
      if (!sentence.is_array()) continue;
      for (auto &w : sentence) {
        if (!w.is_object()) continue;
        for (const char *key : {"ant_id", "ref", "span"})
          if (!w.contains(key)) w[key] = nullptr;
        if (!w.contains("role")) w["role"] = "ordinary";
        if (w["role"] == "anaphor" || w["role"] == "both") {
          ++anaphors;
          if (w["ref"].is_null()) w["ref"] = "__query__";
        }
      }
    }
    if (anaphors != 1)
      throw pronres::UsageError("input must mark exactly one anaphor, found " +
                                std::to_string(anaphors));
    pronres::Document doc = pronres::ParseDocumentJson(j.dump(), "input", false);
    pronres::WordLocation anaphor;
    for (const auto &s : doc.sentences)
      for (size_t w = 0; w < s.words.size(); ++w)
        if (pronres::IsAnaphorRole(s.words[w].role)) anaphor = {s.index, static_cast<int>(w)};

    const pronres::RunConfig &config = model->config;
    std::vector<pronres::Document> corpus;
    if (!config.corpus_dir.empty() && fs::is_directory(config.corpus_dir))
      corpus = pronres::LoadCorpus(config.corpus_dir, false);
    corpus.push_back(doc);
    pronres::Pipeline pipeline(config, corpus);
    const pronres::VariantFlags variant = model->checkpoint.training.variant;
    pronres::DocumentTags tags = pronres::TagDocument(doc, pipeline.taggers());
    pronres::ResolutionInstance inst =
        pronres::BuildInstance(doc, tags, anaphor, pipeline.analyzer(), pipeline.candidates(),
                               pipeline.taggers().front());
    inst.gold.reset();
    inst = pronres::WithVariantCandidates(inst, variant);
    std::optional<pronres::ResolutionInstance> fitted =
        pronres::FitToBudget(inst, pipeline.provider());
    pronres::EncodedExample ex = pronres::Assemble(*fitted, pipeline.provider(), variant.append);
    pronres::ScoreSequence s = pronres::Predict(ex, model->checkpoint.params, variant);
    std::vector<double> scores = pronres::WordScores(s.scores, ex.alignment);
    std::vector<int> ranking = pronres::RankWords(scores, ex.candidate_words, ex.anaphor_word);
    ordered_json out = ordered_json::array();
    for (int w : ranking) {
      const pronres::WordLocation loc = fitted->word_location[w];
      out.push_back({{"word", fitted->paragraph[w].surface},
                     {"position", {{"sentence", loc.sentence}, {"word", loc.word}}},
                     {"score", scores[w]}});
    }
    Emit(ranking_json, out.dump());
  });
}

int pronres_report(const char *dir, char **table) {
  return Guard([&] {
    Require(dir, "report directory");
    fs::path root(dir);
    if (fs::is_directory(root / "reports")) root /= "reports";
    std::vector<pronres::MetricsReport> reports;
    for (const fs::path &f : FilesWithExtension(root, ".json")) {
      std::ifstream in(f, std::ios::binary);
      std::stringstream buffer;
      buffer << in.rdbuf();
      reports.push_back(pronres::MetricsReport::FromJson(buffer.str()));
    }
    if (reports.empty()) throw pronres::UsageError("no reports found in " + root.string());
    std::ostringstream o;
    o << "| model | variant | split | MRR | precision | recall | F1 | accuracy | instances |\n"
      << "|---|---|---|---|---|---|---|---|---|\n";
    char row[512];
    std::set<std::string> splits;
    bool leak = false;
    for (const auto &r : reports) {
      std::snprintf(row, sizeof(row), "| %s | %s | %s | %.4f | %.4f | %.4f | %.4f | %.4f | %lld |\n",
                    r.model.c_str(), pronres::VariantName(r.variant).c_str(), r.split.c_str(),
                    r.mrr, r.precision, r.recall, r.f1, r.accuracy,
                    static_cast<long long>(r.instances));
      o << row;
      splits.insert(r.split);
      std::set<std::string> train(r.train_docs.begin(), r.train_docs.end());
      for (const auto &t : r.test_docs) leak = leak || train.count(t) > 0;
    }
    if (splits.size() > 1) o << "\nwarning: reports use " << splits.size() << " different splits\n";
    if (leak) throw pronres::ValidationError("a report lists a document in both train and test");
    Emit(table, o.str());
  });
}

}  // extern "C"
