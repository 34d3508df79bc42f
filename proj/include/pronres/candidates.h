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

// Candidate antecedent extraction and agreement filtering.

#ifndef PRONRES_CANDIDATES_H_
#define PRONRES_CANDIDATES_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pronres/corpus.h"
#include "pronres/morphology.h"

namespace pronres {

struct Candidate {
  WordLocation location;
  MorphFeatures morph;
  WordItem word;
};

// Which part of the document is searched for candidates.
enum class WindowPolicy {
  kIncludeAnaphorSentencePrefix,  // document start up to the anaphor word
  kExcludeAnaphorSentence,        // document start up to the anaphor sentence
};

// How several taggers vote on nominal status.
enum class TaggerPolicy { kIntersection, kUnion };

struct CandidateOptions {
  WindowPolicy window = WindowPolicy::kIncludeAnaphorSentencePrefix;
  TaggerPolicy policy = TaggerPolicy::kIntersection;
};

// One anaphor in its paragraph. Word indices refer to `paragraph`.
struct ResolutionInstance {
  std::string id;  // "<doc_id>:<sentence>.<word>"
  std::string doc_id;
  std::vector<WordItem> paragraph;
  std::vector<int> word_sentence;  // document sentence index of each paragraph word
  std::vector<WordLocation> word_location;
  int anaphor = 0;
  std::optional<CharSpan> anaphor_span;
  MorphFeatures anaphor_morph;
  std::optional<int> gold;  // absent only for prediction inputs
  std::vector<Candidate> candidates;

  // Paragraph indices of the candidates, in order.
  std::vector<int> CandidateIndices() const;
  int ParagraphIndex(WordLocation loc) const;  // -1 if outside the paragraph
};

// Tags `words` with one tagger. A throwing tagger is re-run word by word so
// the failure names the offending word index.
std::vector<std::string> TagPos(const std::vector<std::string> &words, const Tagger &tagger);

// Tags of every word of a document: [tagger][sentence][word].
using DocumentTags = std::vector<std::vector<std::vector<std::string>>>;
DocumentTags TagDocument(const Document &doc, std::span<const Tagger *const> taggers);

bool IsNominal(const DocumentTags &tags, WordLocation loc, TaggerPolicy policy);

std::vector<Candidate> ExtractCandidates(const Document &doc, WordLocation anaphor,
                                         std::span<const Tagger *const> taggers,
                                         const Analyzer &analyzer,
                                         const CandidateOptions &options = {});
// `head_tagger` tags the sub-words of multi-word items so a phrase takes the
// features of its first nominal word; without it the first sub-word with
// known gender or number is used.
std::vector<Candidate> ExtractCandidates(const Document &doc, const DocumentTags &tags,
                                         WordLocation anaphor, const Analyzer &analyzer,
                                         const CandidateOptions &options = {},
                                         const Tagger *head_tagger = nullptr);

// Keeps gender- and number-compatible candidates; falls back to the input
// when fewer than two survive.
std::vector<Candidate> AgreementFilter(const std::vector<Candidate> &candidates,
                                       const MorphFeatures &anaphor);

// Pronoun features of the anaphor word (the clitic substring for attached
// pronouns).
MorphFeatures AnaphorMorph(const WordItem &word, const Analyzer &analyzer);

struct InstanceAudit {
  int instances = 0;
  int gold_not_candidate = 0;  // gold is nominal but was not extracted
  int gold_not_nominal = 0;
  int unresolved = 0;          // refers_to without a preceding antecedent
};

// Builds one instance per anaphor of `doc`. The paragraph spans sentence 0
// through the anaphor's sentence.
std::vector<ResolutionInstance> BuildInstances(const Document &doc,
                                               std::span<const Tagger *const> taggers,
                                               const Analyzer &analyzer,
                                               const CandidateOptions &options,
                                               InstanceAudit *audit = nullptr);

// Instance for a single anaphor; gold is filled when the anaphor's ref
// resolves to a preceding antecedent.
ResolutionInstance BuildInstance(const Document &doc, const DocumentTags &tags,
                                 WordLocation anaphor, const Analyzer &analyzer,
                                 const CandidateOptions &options,
                                 const Tagger *head_tagger = nullptr);

}  // namespace pronres

#endif  // PRONRES_CANDIDATES_H_
