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

// Corpus representation and ingestion: annotated XML is converted into a
// sequential word-item form, cleaned into anaphor/antecedent pairs and
// persisted as one JSON file per document.

#ifndef PRONRES_CORPUS_H_
#define PRONRES_CORPUS_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pronres {

enum class Role { kOrdinary, kAnaphor, kAntecedent, kBoth };

const char *RoleName(Role role);
Role ParseRole(std::string_view name);  // throws ValidationError

inline bool IsAnaphorRole(Role r) { return r == Role::kAnaphor || r == Role::kBoth; }
inline bool IsAntecedentRole(Role r) {
  return r == Role::kAntecedent || r == Role::kBoth;
}

// Half-open code-point range [begin, end).
struct CharSpan {
  int begin = 0;
  int end = 0;
  bool operator==(const CharSpan &) const = default;
};

struct WordItem {
  std::string surface;
  std::string pos;
  Role role = Role::kOrdinary;
  std::optional<std::string> antecedent_id;
  std::optional<std::string> refers_to;
  // Location of an attached pronoun clitic inside `surface`.
  std::optional<CharSpan> anaphor_span;

  bool operator==(const WordItem &) const = default;
};

struct Sentence {
  int index = 0;
  std::vector<WordItem> words;
  bool operator==(const Sentence &) const = default;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  bool operator==(const Document &) const = default;

  int NumWords() const;
};

struct WordLocation {
  int sentence = 0;
  int word = 0;
  auto operator<=>(const WordLocation &) const = default;
};

enum class PronounKind { kAttached, kDetached };

struct RelationRecord {
  WordLocation anaphor;
  WordLocation antecedent;
  PronounKind kind = PronounKind::kDetached;
};

struct CleaningStats {
  int dangling = 0;
  int chains_collapsed = 0;
  int non_pronominal_dropped = 0;
  int kept = 0;

  CleaningStats &operator+=(const CleaningStats &other);
  bool operator==(const CleaningStats &) const = default;
};

// POS tag classes. Compound tags such as "VERB+PRON" are split on '+';
// a tag is nominal when its first segment is a noun tag and pronominal when
// any segment is a pronoun tag.
bool IsNominalTag(std::string_view pos);
bool IsPronounTag(std::string_view pos);

// Parses annotated XML. Recognized elements: <document id=...>, <s>, <w pos=...>,
// <EXP id=...> (antecedent) and <PTR ref=...> (anaphor). A PTR wrapping a <w>
// marks a detached pronoun; a PTR inside the text of a <w> marks an attached
// clitic and records its character span. Throws ParseError for malformed XML
// (message names the line) and ValidationError for scheme violations.
Document ConvertXml(std::string_view xml, std::string_view source_name = "<input>");
Document ConvertXmlFile(const std::filesystem::path &path);

// Applies the three cleaning rules: drop relations whose target id does not
// exist, keep only pronominal anaphors, and collapse chains onto the nearest
// preceding nominal mention. The result is a fixed point of CleanDocument.
std::pair<Document, CleaningStats> CleanDocument(const Document &doc);

// Resolves every refers_to link to a location. Links that do not resolve are
// skipped.
std::vector<RelationRecord> Relations(const Document &doc);

// Checks the WordItem/Document invariants. With `strict`, every refers_to
// must resolve to exactly one antecedent_id. Errors name `source`, the
// sentence index and the violated invariant.
void ValidateDocument(const Document &doc, std::string_view source, bool strict);

// Corpus JSON: {"doc_id", "sentences": [[{"w","pos","role","ant_id","ref","span"}]]}.
std::string SerializeDocument(const Document &doc);
Document ParseDocumentJson(std::string_view json, std::string_view source,
                           bool strict);

void SaveDocument(const Document &doc, const std::filesystem::path &path);
Document LoadDocument(const std::filesystem::path &path, bool strict);

// Loads every *.json file in `dir`, sorted by file name. Files whose name
// starts with an underscore hold metadata and are skipped.
std::vector<Document> LoadCorpus(const std::filesystem::path &dir,
                                 bool strict = true);

std::string CleaningStatsJson(const CleaningStats &stats);

struct DocumentSplit {
  std::vector<Document> train;
  std::vector<Document> test;
};

// Document-level split. |train| = round(ratio * |docs|); both sides keep the
// input order. Deterministic for a fixed seed.
DocumentSplit SplitDocuments(const std::vector<Document> &docs, double ratio,
                             uint64_t seed);

}  // namespace pronres

#endif  // PRONRES_CORPUS_H_
