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


// Runs the installed command-line binary and checks exit codes and output.

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include "json.hpp"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using pronres::testing::DataDir;
using pronres::testing::ReadFile;
using pronres::testing::TempDir;
using pronres::testing::WriteFile;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result Invoke(const TempDir &tmp, const std::string &args) {
  const fs::path out = tmp / "_stdout", err = tmp / "_stderr";
  const std::string cmd = "cd '" + tmp.path().string() + "' && '" + PRONRES_CLI_PATH + "' " +
                          args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFile(out);
  r.err = ReadFile(err);
  return r;
}

TEST(CliTest, UsageErrors) {
  TempDir tmp;
  EXPECT_EQ(Invoke(tmp, "").code, 7);
  EXPECT_EQ(Invoke(tmp, "train").code, 7);
  EXPECT_EQ(Invoke(tmp, "frobnicate").code, 7);
  Result help = Invoke(tmp, "--help");
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("convert"), std::string::npos);
}

TEST(CliTest, ConvertEmptyDirectorySucceeds) {
  TempDir tmp;
  fs::create_directories(tmp / "in");
  Result r = Invoke(tmp, "convert --in in --out out");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["files"], 0);
}

TEST(CliTest, ConvertReportsCountersAndBadFiles) {
  TempDir tmp;
  Result r = Invoke(tmp, "convert --in '" + (DataDir() / "xml").string() + "' --out out");
  ASSERT_EQ(r.code, 0) << r.err;
  json stats = json::parse(r.out)["stats"];
  EXPECT_EQ(stats["dangling"], 1);
  EXPECT_EQ(stats["chains_collapsed"], 1);

  fs::create_directories(tmp / "mixed");
  fs::copy(DataDir() / "xml" / "school.xml", tmp / "mixed" / "good.xml");
  fs::copy(DataDir() / "malformed.xml", tmp / "mixed" / "bad.xml");
  r = Invoke(tmp, "convert --in mixed --out mixed_out");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("bad.xml"), std::string::npos) << r.err;
  EXPECT_TRUE(fs::exists(tmp / "mixed_out" / "good.json"));
  EXPECT_FALSE(fs::exists(tmp / "mixed_out" / "bad.json"));

  // Converting the same input again gives the same files.
  const std::string first = ReadFile(tmp / "out" / "school.json");
  ASSERT_EQ(Invoke(tmp, "convert --in '" + (DataDir() / "xml").string() + "' --out out").code, 0);
  EXPECT_EQ(ReadFile(tmp / "out" / "school.json"), first);
}

TEST(CliTest, CleanIsIdempotent) {
  TempDir tmp;
  ASSERT_EQ(Invoke(tmp, "synth --out syn --docs 6").code, 0);
  ASSERT_EQ(Invoke(tmp, "clean --in syn/corpus --out c1").code, 0);
  ASSERT_EQ(Invoke(tmp, "clean --in c1 --out c2").code, 0);
  for (const auto &e : fs::directory_iterator(tmp / "c1"))
    EXPECT_EQ(ReadFile(e.path()), ReadFile(tmp / "c2" / e.path().filename()));
}

TEST(CliTest, TrainWithoutProviderNameFails) {
  TempDir tmp;
  ASSERT_EQ(Invoke(tmp, "synth --out syn --docs 6").code, 0);
  WriteFile(tmp / "cfg.json", R"({"paths": {"corpus": "syn/corpus", "out": "run"},
                                  "provider": {"dim": 8}})");
  Result r = Invoke(tmp, "train --config cfg.json");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("provider"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(tmp / "run" / "checkpoint.json"));
}

class CliRunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(Invoke(tmp_, "synth --out syn --docs 12 --ambiguity 0.5").code, 0);
    WriteFile(tmp_ / "cfg.json", R"({"paths": {"corpus": "syn/corpus", "out": "run"},
        "provider": {"name": "stub", "dim": 8},
        "models": ["seq2seq", "knn"],
        "variants": [{"append": false, "mask": false, "filter": false},
                     {"append": true, "mask": true, "filter": true}],
        "training": {"hidden": 4, "max_epochs": 20, "patience": 3}})");
  }

  TempDir tmp_;
};

TEST_F(CliRunTest, TrainIsReproducible) {
  Result r = Invoke(tmp_, "train --config cfg.json --seed 5");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string log = ReadFile(tmp_ / "run" / "training_log.jsonl");
  int epochs = 0;
  for (char c : log) epochs += c == '\n';
  EXPECT_GE(epochs, 1);
  EXPECT_LE(epochs, 20);
  ASSERT_EQ(Invoke(tmp_, "train --config cfg.json --seed 5").code, 0);
  EXPECT_EQ(ReadFile(tmp_ / "run" / "training_log.jsonl"), log);
  ASSERT_EQ(Invoke(tmp_, "train --config cfg.json --seed 5 --out run_b").code, 0);
  EXPECT_EQ(ReadFile(tmp_ / "run_b" / "training_log.jsonl"), log);
}

TEST_F(CliRunTest, EvaluateAndReport) {
  Result r = Invoke(tmp_, "evaluate --config cfg.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["reports"].size(), 4u);
  r = Invoke(tmp_, "report --in run");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| seq2seq | append+mask+filter |"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("| knn | base |"), std::string::npos) << r.out;
}

TEST_F(CliRunTest, EvaluateCheckpointDimensionMismatch) {
  ASSERT_EQ(Invoke(tmp_, "train --config cfg.json").code, 0);
  WriteFile(tmp_ / "wide.json", R"({"paths": {"corpus": "syn/corpus", "out": "wide"},
                                    "provider": {"name": "stub", "dim": 12}})");
  Result r = Invoke(tmp_, "evaluate --config wide.json --checkpoint run/checkpoint.json");
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.err.find("dim 8"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("dim 12"), std::string::npos) << r.err;
}

TEST_F(CliRunTest, PredictFromStdinAndFile) {
  ASSERT_EQ(Invoke(tmp_, "train --config cfg.json").code, 0);
  WriteFile(tmp_ / "q.json", R"({"sentences": [[
      {"w": "الطالب", "pos": "NOUN", "role": "ordinary"},
      {"w": "قابله", "pos": "VERB+PRON", "role": "anaphor", "span": [4, 5]}]]})");
  Result r = Invoke(tmp_, "predict --checkpoint run/checkpoint.json --input - < q.json");
  ASSERT_EQ(r.code, 0) << r.err;
  json ranking = json::parse(r.out);
  ASSERT_EQ(ranking.size(), 1u);
  EXPECT_EQ(ranking[0]["word"], "الطالب");

  WriteFile(tmp_ / "none.json", R"({"sentences": [[{"w": "الطالب", "pos": "NOUN"}]]})");
  r = Invoke(tmp_, "predict --checkpoint run/checkpoint.json --input none.json");
  EXPECT_EQ(r.code, 7);
  EXPECT_NE(r.err.find("anaphor"), std::string::npos) << r.err;
  EXPECT_EQ(Invoke(tmp_, "predict --checkpoint missing.json --input q.json").code, 3);
}

}  // namespace
