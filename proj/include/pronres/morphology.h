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

// Morphological features plus the pluggable tagger and analyzer interfaces.

#ifndef PRONRES_MORPHOLOGY_H_
#define PRONRES_MORPHOLOGY_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pronres/corpus.h"

namespace pronres {

enum class Gender { kMasculine, kFeminine, kUnknown };
enum class Number { kSingular, kDual, kPlural, kUnknown };
enum class Person { kFirst, kSecond, kThird, kUnknown };

struct MorphFeatures {
  Gender gender = Gender::kUnknown;
  Number number = Number::kUnknown;
  Person person = Person::kUnknown;
  std::optional<bool> definite;  // nullopt = unknown

  bool operator==(const MorphFeatures &) const = default;
};

const char *GenderName(Gender g);
const char *NumberName(Number n);
const char *PersonName(Person p);
Gender ParseGender(std::string_view s);
Number ParseNumber(std::string_view s);
Person ParsePerson(std::string_view s);

// Unknown on either side is compatible with anything.
bool GenderCompatible(Gender a, Gender b);
bool NumberCompatible(Number a, Number b);

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::string name() const = 0;
  // One tag per surface.
  virtual std::vector<std::string> Tag(const std::vector<std::string> &surfaces) const = 0;
};

class Analyzer {
 public:
  virtual ~Analyzer() = default;
  virtual std::string name() const = 0;
  virtual MorphFeatures Analyze(std::string_view surface, std::string_view pos) const = 0;
};

// Entries of a lexicon file:
//   {"words": {"<surface>": {"pos": str, "gender": str, "number": str,
//                            "person": str, "definite": bool|null}}}
struct LexiconEntry {
  std::string pos;
  MorphFeatures morph;
};

class Lexicon {
 public:
  static Lexicon Load(const std::filesystem::path &path);
  static Lexicon FromJson(std::string_view json);
  std::string ToJson() const;

  void Add(const std::string &surface, LexiconEntry entry) {
    entries_[surface] = std::move(entry);
  }
  const LexiconEntry *Find(std::string_view surface) const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, LexiconEntry, std::less<>> entries_;
};

// Tags from a lexicon. Multi-word items take the tag of their first
// sub-word that the lexicon knows as nominal, else the first sub-word's tag.
// Unknown surfaces get "UNK".
class LexiconTagger : public Tagger {
 public:
  explicit LexiconTagger(std::shared_ptr<const Lexicon> lexicon)
      : lexicon_(std::move(lexicon)) {}
  std::string name() const override { return "lexicon"; }
  std::vector<std::string> Tag(const std::vector<std::string> &surfaces) const override;

 private:
  std::shared_ptr<const Lexicon> lexicon_;
};

// Unigram tagger over the POS tags stored in a corpus: each surface gets its
// most frequent stored tag (first seen wins ties).
class CorpusTagger : public Tagger {
 public:
  explicit CorpusTagger(const std::vector<Document> &docs);
  std::string name() const override { return "corpus"; }
  std::vector<std::string> Tag(const std::vector<std::string> &surfaces) const override;

 private:
  std::map<std::string, std::string, std::less<>> tags_;
};

class LexiconAnalyzer : public Analyzer {
 public:
  explicit LexiconAnalyzer(std::shared_ptr<const Lexicon> lexicon)
      : lexicon_(std::move(lexicon)) {}
  std::string name() const override { return "lexicon"; }
  MorphFeatures Analyze(std::string_view surface, std::string_view pos) const override;

 private:
  std::shared_ptr<const Lexicon> lexicon_;
};

// Affix-based analyzer for Arabic: pronoun table for detached pronouns and
// clitics, the definite article, and the common feminine/dual/plural endings.
class ArabicRuleAnalyzer : public Analyzer {
 public:
  std::string name() const override { return "arabic_rules"; }
  MorphFeatures Analyze(std::string_view surface, std::string_view pos) const override;
};

// Everything a registered component may need at construction time.
struct ComponentContext {
  std::optional<std::filesystem::path> lexicon_path;
  const std::vector<Document> *corpus = nullptr;
};

// Registered names: taggers "lexicon", "corpus"; analyzers "lexicon",
// "arabic_rules". Unknown names throw ConfigError.
std::unique_ptr<Tagger> MakeTagger(std::string_view name, const ComponentContext &ctx);
std::unique_ptr<Analyzer> MakeAnalyzer(std::string_view name, const ComponentContext &ctx);
std::vector<std::string> RegisteredTaggers();
std::vector<std::string> RegisteredAnalyzers();

}  // namespace pronres

#endif  // PRONRES_MORPHOLOGY_H_
