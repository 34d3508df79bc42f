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

#include "pronres/morphology.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "pronres/error.h"
#include "pronres/utf8.h"

namespace pronres {

const char *GenderName(Gender g) {
  switch (g) {
    case Gender::kMasculine: return "masculine";
    case Gender::kFeminine: return "feminine";
    case Gender::kUnknown: return "unknown";
  }
  return "unknown";
}

const char *NumberName(Number n) {
  switch (n) {
    case Number::kSingular: return "singular";
    case Number::kDual: return "dual";
    case Number::kPlural: return "plural";
    case Number::kUnknown: return "unknown";
  }
  return "unknown";
}

const char *PersonName(Person p) {
  switch (p) {
    case Person::kFirst: return "first";
    case Person::kSecond: return "second";
    case Person::kThird: return "third";
    case Person::kUnknown: return "unknown";
  }
  return "unknown";
}

Gender ParseGender(std::string_view s) {
  if (s == "masculine") return Gender::kMasculine;
  if (s == "feminine") return Gender::kFeminine;
  if (s == "unknown") return Gender::kUnknown;
  throw ValidationError("unknown gender '" + std::string(s) + "'");
}

Number ParseNumber(std::string_view s) {
  if (s == "singular") return Number::kSingular;
  if (s == "dual") return Number::kDual;
  if (s == "plural") return Number::kPlural;
  if (s == "unknown") return Number::kUnknown;
  throw ValidationError("unknown number '" + std::string(s) + "'");
}

Person ParsePerson(std::string_view s) {
  if (s == "first") return Person::kFirst;
  if (s == "second") return Person::kSecond;
  if (s == "third") return Person::kThird;
  if (s == "unknown") return Person::kUnknown;
  throw ValidationError("unknown person '" + std::string(s) + "'");
}

bool GenderCompatible(Gender a, Gender b) {
  return a == Gender::kUnknown || b == Gender::kUnknown || a == b;
}

bool NumberCompatible(Number a, Number b) {
  return a == Number::kUnknown || b == Number::kUnknown || a == b;
}

// ---------------------------------------------------------------------------

Lexicon Lexicon::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return FromJson(buffer.str());
  } catch (const Error &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

Lexicon Lexicon::FromJson(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json.begin(), json.end());
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(e.what());
  }
  if (!j.is_object() || !j.contains("words") || !j["words"].is_object())
    throw ValidationError("lexicon must be {\"words\": {...}}");
  Lexicon lexicon;
  for (const auto &[surface, e] : j["words"].items()) {
    LexiconEntry entry;
    entry.pos = e.value("pos", "UNK");
    entry.morph.gender = ParseGender(e.value("gender", "unknown"));
    entry.morph.number = ParseNumber(e.value("number", "unknown"));
    entry.morph.person = ParsePerson(e.value("person", "unknown"));
    if (e.contains("definite") && !e["definite"].is_null())
      entry.morph.definite = e["definite"].get<bool>();
    lexicon.Add(surface, std::move(entry));
  }
  return lexicon;
}

std::string Lexicon::ToJson() const {
  nlohmann::ordered_json words = nlohmann::ordered_json::object();
  for (const auto &[surface, e] : entries_) {
    nlohmann::ordered_json j;
    j["pos"] = e.pos;
    j["gender"] = GenderName(e.morph.gender);
    j["number"] = NumberName(e.morph.number);
    j["person"] = PersonName(e.morph.person);
    j["definite"] = e.morph.definite ? nlohmann::ordered_json(*e.morph.definite)
                                     : nlohmann::ordered_json(nullptr);
    words[surface] = j;
  }
  nlohmann::ordered_json root;
  root["words"] = words;
  return root.dump(1);
}

const LexiconEntry *Lexicon::Find(std::string_view surface) const {
  auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string> SplitSpaces(std::string_view s) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == ' ') {
      if (!current.empty()) parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

}  // namespace

std::vector<std::string> LexiconTagger::Tag(const std::vector<std::string> &surfaces) const {
  std::vector<std::string> tags;
  tags.reserve(surfaces.size());
  for (const std::string &surface : surfaces) {
    if (const LexiconEntry *e = lexicon_->Find(surface)) {
      tags.push_back(e->pos);
      continue;
    }
    std::string tag = "UNK";
    bool first = true;
    for (const std::string &part : SplitSpaces(surface)) {
      const LexiconEntry *e = lexicon_->Find(part);
      if (!e) continue;
      if (first) tag = e->pos;
      first = false;
      if (IsNominalTag(e->pos)) {
        tag = e->pos;
        break;
      }
    }
    tags.push_back(tag);
  }
  return tags;
}

CorpusTagger::CorpusTagger(const std::vector<Document> &docs) {
  std::map<std::string, std::map<std::string, int>> counts;
  std::map<std::string, std::vector<std::string>> order;
  for (const Document &d : docs) {
    for (const Sentence &s : d.sentences) {
      for (const WordItem &w : s.words) {
        if (counts[w.surface][w.pos]++ == 0) order[w.surface].push_back(w.pos);
      }
    }
  }
  for (const auto &[surface, seen] : order) {
    const auto &c = counts[surface];
    std::string best = seen.front();
    for (const std::string &tag : seen) {
      if (c.at(tag) > c.at(best)) best = tag;
    }
    tags_[surface] = best;
  }
}

std::vector<std::string> CorpusTagger::Tag(const std::vector<std::string> &surfaces) const {
  std::vector<std::string> tags;
  tags.reserve(surfaces.size());
  for (const std::string &s : surfaces) {
    auto it = tags_.find(s);
    tags.push_back(it == tags_.end() ? "UNK" : it->second);
  }
  return tags;
}

MorphFeatures LexiconAnalyzer::Analyze(std::string_view surface, std::string_view) const {
  if (const LexiconEntry *e = lexicon_->Find(surface)) return e->morph;
  return {};
}

// ---------------------------------------------------------------------------

namespace {

struct PronounEntry {
  Person person;
  Gender gender;
  Number number;
};

const std::unordered_map<std::string, PronounEntry> &DetachedPronouns() {
  static const auto *table = new std::unordered_map<std::string, PronounEntry>{
      {"هو", {Person::kThird, Gender::kMasculine, Number::kSingular}},
      {"هي", {Person::kThird, Gender::kFeminine, Number::kSingular}},
      {"هم", {Person::kThird, Gender::kMasculine, Number::kPlural}},
      {"هن", {Person::kThird, Gender::kFeminine, Number::kPlural}},
      {"هما", {Person::kThird, Gender::kUnknown, Number::kDual}},
      {"أنا", {Person::kFirst, Gender::kUnknown, Number::kSingular}},
      {"نحن", {Person::kFirst, Gender::kUnknown, Number::kPlural}},
      {"أنت", {Person::kSecond, Gender::kUnknown, Number::kSingular}},
      {"أنتم", {Person::kSecond, Gender::kMasculine, Number::kPlural}},
      {"أنتن", {Person::kSecond, Gender::kFeminine, Number::kPlural}},
      {"أنتما", {Person::kSecond, Gender::kUnknown, Number::kDual}},
  };
  return *table;
}

const std::unordered_map<std::string, PronounEntry> &Clitics() {
  static const auto *table = new std::unordered_map<std::string, PronounEntry>{
      {"ه", {Person::kThird, Gender::kMasculine, Number::kSingular}},
      {"ها", {Person::kThird, Gender::kFeminine, Number::kSingular}},
      {"هم", {Person::kThird, Gender::kMasculine, Number::kPlural}},
      {"هن", {Person::kThird, Gender::kFeminine, Number::kPlural}},
      {"هما", {Person::kThird, Gender::kUnknown, Number::kDual}},
      {"ي", {Person::kFirst, Gender::kUnknown, Number::kSingular}},
      {"ني", {Person::kFirst, Gender::kUnknown, Number::kSingular}},
      {"نا", {Person::kFirst, Gender::kUnknown, Number::kPlural}},
      {"ك", {Person::kSecond, Gender::kUnknown, Number::kSingular}},
      {"كم", {Person::kSecond, Gender::kMasculine, Number::kPlural}},
      {"كن", {Person::kSecond, Gender::kFeminine, Number::kPlural}},
      {"كما", {Person::kSecond, Gender::kUnknown, Number::kDual}},
  };
  return *table;
}

}  // namespace

MorphFeatures ArabicRuleAnalyzer::Analyze(std::string_view surface,
                                          std::string_view pos) const {
  MorphFeatures m;
  std::string s(surface);
  if (IsPronounTag(pos) || DetachedPronouns().count(s) || Clitics().count(s)) {
    const PronounEntry *entry = nullptr;
    if (auto it = DetachedPronouns().find(s); it != DetachedPronouns().end()) {
      entry = &it->second;
    } else if (auto ct = Clitics().find(s); ct != Clitics().end()) {
      entry = &ct->second;
    }
    if (entry != nullptr) {
      m.person = entry->person;
      m.gender = entry->gender;
      m.number = entry->number;
      m.definite = true;
      return m;
    }
    if (IsPronounTag(pos) && !IsNominalTag(pos)) return m;
  }
  m.person = Person::kThird;
  m.definite = utf8::StartsWith(s, "ال") || utf8::StartsWith(s, "وال") ||
               utf8::StartsWith(s, "بال") || utf8::StartsWith(s, "فال") ||
               utf8::StartsWith(s, "لل");
  if (utf8::Length(s) <= 2) {
    m.gender = Gender::kMasculine;
    m.number = Number::kSingular;
  } else if (utf8::EndsWith(s, "ات")) {
    m.gender = Gender::kFeminine;
    m.number = Number::kPlural;
  } else if (utf8::EndsWith(s, "ون") || utf8::EndsWith(s, "ين")) {
    m.gender = Gender::kMasculine;
    m.number = Number::kPlural;
  } else if (utf8::EndsWith(s, "تان")) {
    m.gender = Gender::kFeminine;
    m.number = Number::kDual;
  } else if (utf8::EndsWith(s, "ان")) {
    m.gender = Gender::kMasculine;
    m.number = Number::kDual;
  } else if (utf8::EndsWith(s, "ة")) {
    m.gender = Gender::kFeminine;
    m.number = Number::kSingular;
  } else {
    m.gender = Gender::kMasculine;
    m.number = Number::kSingular;
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<const Lexicon> RequireLexicon(const ComponentContext &ctx,
                                              std::string_view component) {
  if (!ctx.lexicon_path)
    throw ConfigError(std::string(component) + " 'lexicon' requires a lexicon path");
  return std::make_shared<const Lexicon>(Lexicon::Load(*ctx.lexicon_path));
}

}  // namespace

std::unique_ptr<Tagger> MakeTagger(std::string_view name, const ComponentContext &ctx) {
  if (name == "lexicon") return std::make_unique<LexiconTagger>(RequireLexicon(ctx, "tagger"));
  if (name == "corpus") {
    if (ctx.corpus == nullptr) throw ConfigError("tagger 'corpus' requires a loaded corpus");
    return std::make_unique<CorpusTagger>(*ctx.corpus);
  }
  throw ConfigError("unknown tagger '" + std::string(name) + "'");
}

std::unique_ptr<Analyzer> MakeAnalyzer(std::string_view name, const ComponentContext &ctx) {
  if (name == "lexicon")
    return std::make_unique<LexiconAnalyzer>(RequireLexicon(ctx, "analyzer"));
  if (name == "arabic_rules") return std::make_unique<ArabicRuleAnalyzer>();
  throw ConfigError("unknown analyzer '" + std::string(name) + "'");
}

std::vector<std::string> RegisteredTaggers() { return {"corpus", "lexicon"}; }
std::vector<std::string> RegisteredAnalyzers() { return {"arabic_rules", "lexicon"}; }

}  // namespace pronres
