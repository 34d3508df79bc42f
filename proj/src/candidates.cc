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

#include "pronres/candidates.h"

#include <unordered_map>

#include "pronres/error.h"
#include "pronres/utf8.h"

namespace pronres {

std::vector<int> ResolutionInstance::CandidateIndices() const {
  std::vector<int> indices;
  indices.reserve(candidates.size());
  for (const Candidate &c : candidates) indices.push_back(ParagraphIndex(c.location));
  return indices;
}

int ResolutionInstance::ParagraphIndex(WordLocation loc) const {
  for (int i = 0; i < static_cast<int>(word_location.size()); ++i) {
    if (word_location[i] == loc) return i;
  }
  return -1;
}

std::vector<std::string> TagPos(const std::vector<std::string> &words, const Tagger &tagger) {
  std::vector<std::string> tags;
  try {
    tags = tagger.Tag(words);
  } catch (const std::exception &batch_error) {
    for (size_t i = 0; i < words.size(); ++i) {
      try {
        tagger.Tag({words[i]});
      } catch (const std::exception &e) {
        throw ValidationError("tagger '" + tagger.name() + "' failed at word " +
                              std::to_string(i) + ": " + e.what());
      }
    }
    throw ValidationError("tagger '" + tagger.name() + "' failed: " + batch_error.what());
  }
  if (tags.size() != words.size()) {
    throw ValidationError("tagger '" + tagger.name() + "' returned " +
                          std::to_string(tags.size()) + " tags for " +
                          std::to_string(words.size()) + " words (first untagged word " +
                          std::to_string(std::min(tags.size(), words.size())) + ")");
  }
  return tags;
}

DocumentTags TagDocument(const Document &doc, std::span<const Tagger *const> taggers) {
  if (taggers.empty()) throw ConfigError("at least one tagger is required");
  DocumentTags tags(taggers.size());
  for (size_t t = 0; t < taggers.size(); ++t) {
    for (const Sentence &s : doc.sentences) {
      std::vector<std::string> surfaces;
      surfaces.reserve(s.words.size());
      for (const WordItem &w : s.words) surfaces.push_back(w.surface);
      tags[t].push_back(TagPos(surfaces, *taggers[t]));
    }
  }
  return tags;
}

bool IsNominal(const DocumentTags &tags, WordLocation loc, TaggerPolicy policy) {
  bool all = true, any = false;
  for (const auto &per_tagger : tags) {
    bool nominal = IsNominalTag(per_tagger[loc.sentence][loc.word]);
    all = all && nominal;
    any = any || nominal;
  }
  return policy == TaggerPolicy::kIntersection ? all : any;
}

namespace {

std::vector<std::string> SplitSpaces(const std::string &s) {
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

void CheckAnaphor(const Document &doc, WordLocation anaphor) {
  if (anaphor.sentence < 0 || anaphor.sentence >= static_cast<int>(doc.sentences.size()) ||
      anaphor.word < 0 ||
      anaphor.word >= static_cast<int>(doc.sentences[anaphor.sentence].words.size())) {
    throw UsageError("anaphor location (" + std::to_string(anaphor.sentence) + ", " +
                     std::to_string(anaphor.word) + ") is outside document " + doc.doc_id);
  }
  const WordItem &w = doc.sentences[anaphor.sentence].words[anaphor.word];
  if (!IsAnaphorRole(w.role)) {
    throw UsageError("word (" + std::to_string(anaphor.sentence) + ", " +
                     std::to_string(anaphor.word) + ") of document " + doc.doc_id +
                     " is not an anaphor");
  }
}

// Features of a candidate item. Phrases use their first nominal word.
MorphFeatures CandidateMorph(const WordItem &word, const std::string &tag,
                             const Analyzer &analyzer, const Tagger *head_tagger) {
  std::vector<std::string> parts = SplitSpaces(word.surface);
  if (parts.size() <= 1) return analyzer.Analyze(word.surface, tag);
  if (head_tagger != nullptr) {
    std::vector<std::string> part_tags = TagPos(parts, *head_tagger);
    for (size_t i = 0; i < parts.size(); ++i) {
      if (IsNominalTag(part_tags[i])) return analyzer.Analyze(parts[i], part_tags[i]);
    }
  }
  for (const std::string &part : parts) {
    MorphFeatures m = analyzer.Analyze(part, tag);
    if (m.gender != Gender::kUnknown || m.number != Number::kUnknown) return m;
  }
  return analyzer.Analyze(parts.front(), tag);
}

}  // namespace

std::vector<Candidate> ExtractCandidates(const Document &doc, WordLocation anaphor,
                                         std::span<const Tagger *const> taggers,
                                         const Analyzer &analyzer,
                                         const CandidateOptions &options) {
  CheckAnaphor(doc, anaphor);
  return ExtractCandidates(doc, TagDocument(doc, taggers), anaphor, analyzer, options,
                           taggers.front());
}

std::vector<Candidate> ExtractCandidates(const Document &doc, const DocumentTags &tags,
                                         WordLocation anaphor, const Analyzer &analyzer,
                                         const CandidateOptions &options,
                                         const Tagger *head_tagger) {
  CheckAnaphor(doc, anaphor);
  std::vector<Candidate> candidates;
  for (int s = 0; s <= anaphor.sentence; ++s) {
    const auto &words = doc.sentences[s].words;
    int limit = static_cast<int>(words.size());
    if (s == anaphor.sentence) {
      if (options.window == WindowPolicy::kExcludeAnaphorSentence) break;
      limit = anaphor.word;
    }
    for (int w = 0; w < limit; ++w) {
      WordLocation loc{s, w};
      if (!IsNominal(tags, loc, options.policy)) continue;
      Candidate c;
      c.location = loc;
      c.word = words[w];
      c.morph = CandidateMorph(words[w], tags.front()[s][w], analyzer, head_tagger);
      candidates.push_back(std::move(c));
    }
  }
  return candidates;
}

std::vector<Candidate> AgreementFilter(const std::vector<Candidate> &candidates,
                                       const MorphFeatures &anaphor) {
  std::vector<Candidate> kept;
  for (const Candidate &c : candidates) {
    if (GenderCompatible(c.morph.gender, anaphor.gender) &&
        NumberCompatible(c.morph.number, anaphor.number)) {
      kept.push_back(c);
    }
  }
  if (kept.size() < 2) return candidates;
  return kept;
}

MorphFeatures AnaphorMorph(const WordItem &word, const Analyzer &analyzer) {
  if (word.anaphor_span) {
    return analyzer.Analyze(
        utf8::Substr(word.surface, word.anaphor_span->begin, word.anaphor_span->end), "PRON");
  }
  return analyzer.Analyze(word.surface, word.pos);
}

ResolutionInstance BuildInstance(const Document &doc, const DocumentTags &tags,
                                 WordLocation anaphor, const Analyzer &analyzer,
                                 const CandidateOptions &options, const Tagger *head_tagger) {
  CheckAnaphor(doc, anaphor);
  ResolutionInstance inst;
  inst.doc_id = doc.doc_id;
  inst.id = doc.doc_id + ":" + std::to_string(anaphor.sentence) + "." +
            std::to_string(anaphor.word);
  for (int s = 0; s <= anaphor.sentence; ++s) {
    const auto &words = doc.sentences[s].words;
    for (int w = 0; w < static_cast<int>(words.size()); ++w) {
      inst.paragraph.push_back(words[w]);
      inst.word_sentence.push_back(s);
      inst.word_location.push_back({s, w});
    }
  }
  inst.anaphor = inst.ParagraphIndex(anaphor);
  const WordItem &ana = doc.sentences[anaphor.sentence].words[anaphor.word];
  inst.anaphor_span = ana.anaphor_span;
  inst.anaphor_morph = AnaphorMorph(ana, analyzer);
  if (ana.refers_to) {
    for (int i = 0; i < inst.anaphor; ++i) {
      const auto &id = inst.paragraph[i].antecedent_id;
      if (id && *id == *ana.refers_to) {
        inst.gold = i;
        break;
      }
    }
  }
  inst.candidates = ExtractCandidates(doc, tags, anaphor, analyzer, options, head_tagger);
  return inst;
}

std::vector<ResolutionInstance> BuildInstances(const Document &doc,
                                               std::span<const Tagger *const> taggers,
                                               const Analyzer &analyzer,
                                               const CandidateOptions &options,
                                               InstanceAudit *audit) {
  DocumentTags tags = TagDocument(doc, taggers);
  std::vector<ResolutionInstance> instances;
  InstanceAudit local;
  for (const Sentence &s : doc.sentences) {
    for (int w = 0; w < static_cast<int>(s.words.size()); ++w) {
      if (!IsAnaphorRole(s.words[w].role)) continue;
      ResolutionInstance inst =
          BuildInstance(doc, tags, {s.index, w}, analyzer, options, taggers.front());
      if (!inst.gold) {
        ++local.unresolved;
        continue;
      }
      WordLocation gold_loc = inst.word_location[*inst.gold];
      bool in_candidates = false;
      for (const Candidate &c : inst.candidates) in_candidates |= c.location == gold_loc;
      if (!IsNominalTag(inst.paragraph[*inst.gold].pos)) {
        ++local.gold_not_nominal;
      } else if (!in_candidates) {
        ++local.gold_not_candidate;
      }
      ++local.instances;
      instances.push_back(std::move(inst));
    }
  }
  if (audit != nullptr) {
    audit->instances += local.instances;
    audit->gold_not_candidate += local.gold_not_candidate;
    audit->gold_not_nominal += local.gold_not_nominal;
    audit->unresolved += local.unresolved;
  }
  return instances;
}

}  // namespace pronres
