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


// Command-line front end. Talks to the library only through pronres.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pronres/pronres.h"

namespace {

// Owns a string returned by the library.
class Owned {
 public:
  Owned() = default;
  ~Owned() { pronres_string_free(s_); }
  Owned(const Owned &) = delete;
  Owned &operator=(const Owned &) = delete;
  char **out() { return &s_; }
  std::string str() const { return s_ ? s_ : ""; }

 private:
  char *s_ = nullptr;
};

int Fail(int status) {
  std::fprintf(stderr, "pronres: %s: %s\n", pronres_status_name(status), pronres_last_error());
  return status;
}

int Finish(int status, const Owned &summary) {
  std::string s = summary.str();
  if (!s.empty()) std::fprintf(stdout, "%s\n", s.c_str());
  return status == PRONRES_OK ? 0 : Fail(status);
}

struct ConfigHandle {
  pronres_config *config = nullptr;
  ~ConfigHandle() { pronres_config_free(config); }
};

int LoadConfig(const std::string &path, const std::vector<uint64_t> &seed,
               const std::string &out, ConfigHandle *handle) {
  int st = pronres_config_load(path.c_str(), &handle->config);
  if (st != PRONRES_OK) return st;
  if (!seed.empty() && (st = pronres_config_set_seed(handle->config, seed[0])) != PRONRES_OK)
    return st;
  if (!out.empty() && (st = pronres_config_set_out_dir(handle->config, out.c_str())) != PRONRES_OK)
    return st;
  return pronres_config_validate(handle->config);
}

bool ReadInput(const std::string &path, std::string *text) {
  if (path == "-") {
    text->assign(std::istreambuf_iterator<char>(std::cin), {});
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  text->assign(std::istreambuf_iterator<char>(in), {});
  return true;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Pronoun resolution with a Bi-LSTM sequence scorer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pronres_version()));

  std::string in, out, config, input;
  double ratio = 0.7;
  uint64_t split_seed = 1;
  std::vector<uint64_t> seed;
  std::vector<std::string> checkpoints;
  std::string checkpoint;

  auto *convert = app.add_subcommand("convert", "Convert annotated XML to corpus JSON");
  convert->add_option("--in", in, "XML directory")->required();
  convert->add_option("--out", out, "Output directory")->required();

  auto *clean = app.add_subcommand("clean", "Collapse reference chains and drop dangling links");
  clean->add_option("--in", in, "Corpus JSON directory")->required();
  clean->add_option("--out", out, "Output directory")->required();

  auto *split = app.add_subcommand("split", "Seeded document-level train/test split");
  split->add_option("--in", in, "Corpus JSON directory")->required();
  split->add_option("--out", out, "Output directory")->required();
  split->add_option("--ratio", ratio, "Training fraction")->check(CLI::Range(0.0, 1.0));
  split->add_option("--seed", split_seed, "Shuffle seed");

  nlohmann::json synth_options = nlohmann::json::object();
  int docs = 20;
  uint64_t synth_seed = 1;
  double ambiguity = 0.0, unmarked = 0.0;
  std::string synth_json;
  auto *synth = app.add_subcommand("synth", "Generate a synthetic agreement corpus");
  synth->add_option("--out", out, "Output directory")->required();
  auto *o_docs = synth->add_option("--docs", docs, "Number of documents");
  auto *o_seed = synth->add_option("--seed", synth_seed, "Generator seed");
  auto *o_amb = synth->add_option("--ambiguity", ambiguity, "Same-class distractor rate");
  auto *o_unm = synth->add_option("--unmarked", unmarked, "Rate of nouns without a suffix");
  synth->add_option("--options", synth_json, "Further options as a JSON object");

  auto *train = app.add_subcommand("train", "Train the sequence model");
  train->add_option("--config", config, "Run configuration")->required();
  train->add_option("--seed", seed, "Override every seed")->expected(1);
  train->add_option("--out", out, "Override the output directory");

  auto *evaluate = app.add_subcommand("evaluate", "Evaluate checkpoints or the model matrix");
  evaluate->add_option("--config", config, "Run configuration")->required();
  evaluate->add_option("--checkpoint", checkpoints, "Checkpoint file (repeatable)");
  evaluate->add_option("--seed", seed, "Override every seed")->expected(1);
  evaluate->add_option("--out", out, "Override the output directory");

  auto *predict = app.add_subcommand("predict", "Rank the candidates of one anaphor");
  predict->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  predict->add_option("--input", input, "Document JSON ('-' for stdin)")->required();

  auto *report = app.add_subcommand("report", "Summarize evaluation reports");
  report->add_option("--in", in, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return PRONRES_ERR_USAGE;
  }

  Owned summary;
  if (*convert) return Finish(pronres_convert_dir(in.c_str(), out.c_str(), summary.out()), summary);
  if (*clean) return Finish(pronres_clean_dir(in.c_str(), out.c_str(), summary.out()), summary);
  if (*split) {
    return Finish(pronres_split_dir(in.c_str(), out.c_str(), ratio, split_seed, summary.out()),
                  summary);
  }
  if (*synth) {
    if (!synth_json.empty()) {
      try {
        synth_options = nlohmann::json::parse(synth_json);
      } catch (const nlohmann::json::parse_error &e) {
        std::fprintf(stderr, "pronres: --options: %s\n", e.what());
        return PRONRES_ERR_CONFIG;
      }
      if (!synth_options.is_object()) {
        std::fprintf(stderr, "pronres: --options must be a JSON object\n");
        return PRONRES_ERR_CONFIG;
      }
    }
    if (*o_docs) synth_options["docs"] = docs;
    if (*o_seed) synth_options["seed"] = synth_seed;
    if (*o_amb) synth_options["ambiguity"] = ambiguity;
    if (*o_unm) synth_options["unmarked_rate"] = unmarked;
    int st = pronres_synth(synth_options.dump().c_str(), out.c_str());
    return st == PRONRES_OK ? 0 : Fail(st);
  }
  if (*train || *evaluate) {
    ConfigHandle handle;
    int st = LoadConfig(config, seed, out, &handle);
    if (st != PRONRES_OK) return Fail(st);
    if (*train) return Finish(pronres_train(handle.config, summary.out()), summary);
    std::vector<const char *> paths;
    for (const std::string &c : checkpoints) paths.push_back(c.c_str());
    return Finish(pronres_evaluate(handle.config, paths.data(), paths.size(), summary.out()),
                  summary);
  }
  if (*predict) {
    std::string text;
    if (!ReadInput(input, &text)) {
      std::fprintf(stderr, "pronres: cannot read %s\n", input.c_str());
      return PRONRES_ERR_IO;
    }
    pronres_model *model = nullptr;
    int st = pronres_model_load(checkpoint.c_str(), &model);
    if (st != PRONRES_OK) return Fail(st);
    Owned ranking;
    st = pronres_predict(model, text.c_str(), ranking.out());
    pronres_model_free(model);
    if (st != PRONRES_OK) return Fail(st);
    std::printf("%s\n", ranking.str().c_str());
    return 0;
  }
  if (*report) {
    Owned table;
    int st = pronres_report(in.c_str(), table.out());
    if (st != PRONRES_OK) return Fail(st);
    std::printf("%s", table.str().c_str());
    return 0;
  }
  return PRONRES_ERR_USAGE;
}
