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


#include "pronres/synth.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "pronres/error.h"
#include "pronres/random.h"
#include "pronres/utf8.h"

namespace pronres {

void SynthOptions::Validate() const {
  if (docs <= 0) throw ConfigError("synth: docs must be positive");
  if (min_sentences < 2 || max_sentences < min_sentences)
    throw ConfigError("synth: need 2 <= min_sentences <= max_sentences");
  if (lead_sentences < 1 || lead_sentences >= max_sentences)
    throw ConfigError("synth: need 1 <= lead_sentences < max_sentences");
  if (nouns_per_sentence < 1) throw ConfigError("synth: nouns_per_sentence must be positive");
  if (vocab < 4) throw ConfigError("synth: vocab must be at least 4");
  for (double r : {unmarked_rate, ambiguity, agreement_noise, attached_rate, adjective_rate, anaphor_rate}) {
    if (r < 0.0 || r > 1.0) throw ConfigError("synth: rates must lie in [0, 1]");
  }
}

namespace {

// Root letters never collide with the suffixes or the article.
const std::array<const char *, 20> kLetters = {"ب", "ج", "د", "ر", "س", "ش", "ص",
                                               "ض", "ط", "ظ", "ع", "غ", "ف", "ق",
                                               "ك", "ح", "خ", "ز", "ث", "ذ"};

struct AgreementClass {
  Gender gender;
  Number number;
  const char *suffix;
  const char *pronoun;
  const char *clitic;
};

const std::array<AgreementClass, 4> kClasses = {{
    {Gender::kMasculine, Number::kSingular, "", "هو", "ه"},
    {Gender::kFeminine, Number::kSingular, "ة", "هي", "ها"},
    {Gender::kMasculine, Number::kPlural, "ون", "هم", "هم"},
    {Gender::kFeminine, Number::kPlural, "ات", "هن", "هن"},
}};

const std::array<const char *, 4> kParticles = {"في", "على", "عن", "إلى"};

std::vector<std::string> MakeRoots(Rng &rng, int n) {
  std::set<std::string> seen;
  std::vector<std::string> roots;
  while (static_cast<int>(roots.size()) < n) {
    std::string r;
    for (int i = 0; i < 3; ++i) r += kLetters[rng.Below(kLetters.size())];
    if (seen.insert(r).second) roots.push_back(r);
  }
  return roots;
}

class DocBuilder {
 public:
  DocBuilder(const SynthOptions &options, Rng &rng, const std::vector<std::string> &nouns,
             const std::array<std::vector<std::string>, 4> &unmarked,
             const std::vector<std::string> &adjectives, const std::vector<std::string> &verbs,
             Lexicon &lexicon)
      : options_(options),
        rng_(rng),
        nouns_(nouns),
        unmarked_(unmarked),
        adjectives_(adjectives),
        verbs_(verbs),
        lexicon_(lexicon) {}

  Document Build(const std::string &doc_id) {
    doc_.doc_id = doc_id;
    const int sentences =
        options_.min_sentences +
        static_cast<int>(rng_.Below(options_.max_sentences - options_.min_sentences + 1));
    for (int s = 0; s < sentences; ++s) {
      doc_.sentences.push_back({s, {}});
      if (s >= options_.lead_sentences && !mentions_.empty() && rng_.Bernoulli(options_.anaphor_rate)) {
        AnaphorSentence();
      } else {
        PlainSentence();
      }
    }
    return std::move(doc_);
  }

 private:
  struct Mention {
    WordLocation location;
    int cls;
  };

  std::vector<WordItem> &words() { return doc_.sentences.back().words; }
  WordLocation Here() const {
    return {static_cast<int>(doc_.sentences.size()) - 1,
            static_cast<int>(doc_.sentences.back().words.size())};
  }

  void Word(const std::string &surface, const std::string &pos) {
    words().push_back(WordItem{surface, pos, Role::kOrdinary, {}, {}, {}});
  }

  void Verb() {
    const std::string v = verbs_[rng_.Below(verbs_.size())];
    Word(v, "VERB");
    AddLexicon(v, "VERB", MorphFeatures{});
  }

  void NounPhrase(int cls) {
    const AgreementClass &c = kClasses[cls];
    const bool definite = rng_.Bernoulli(0.5);
    std::string stem;
    if (!unmarked_[cls].empty() && rng_.Bernoulli(options_.unmarked_rate)) {
      stem = unmarked_[cls][rng_.Below(unmarked_[cls].size())];
    } else {
      stem = nouns_[rng_.Below(nouns_.size())] + c.suffix;
    }
    std::string surface = (definite ? "ال" : "") + stem;
    mentions_.push_back({Here(), cls});
    Word(surface, "NOUN");
    MorphFeatures m{c.gender, c.number, Person::kThird, definite};
    if (rng_.Bernoulli(options_.agreement_noise)) {
      m.gender = rng_.Bernoulli(0.5) ? Gender::kMasculine : Gender::kFeminine;
      m.number = rng_.Bernoulli(0.5) ? Number::kSingular : Number::kPlural;
    }
    AddLexicon(surface, "NOUN", m);
    if (rng_.Bernoulli(options_.adjective_rate)) {
      std::string adj =
          (definite ? "ال" : "") + adjectives_[rng_.Below(adjectives_.size())] + c.suffix;
      Word(adj, "ADJ");
      AddLexicon(adj, "ADJ", MorphFeatures{c.gender, c.number, Person::kThird, definite});
    }
  }

  void Particle() {
    const std::string p = kParticles[rng_.Below(kParticles.size())];
    Word(p, "PREP");
    AddLexicon(p, "PREP", MorphFeatures{});
  }

  int RandomClass() { return static_cast<int>(rng_.Below(kClasses.size())); }

  void PlainSentence() {
    Verb();
    NounPhrase(RandomClass());
    for (int i = 1; i < options_.nouns_per_sentence; ++i) {
      Particle();
      NounPhrase(RandomClass());
    }
  }

  void AnaphorSentence() {
    const Mention target = mentions_[rng_.Below(mentions_.size())];
    const int cls = target.cls;
    const bool attached = rng_.Bernoulli(options_.attached_rate);
    const bool inject = rng_.Bernoulli(options_.ambiguity);
    if (attached) {
      if (inject) {
        Particle();
        NounPhrase((cls + 1 + static_cast<int>(rng_.Below(kClasses.size() - 1))) % 4);
      }
      const std::string v = verbs_[rng_.Below(verbs_.size())];
      const std::string surface = v + kClasses[cls].clitic;
      Anaphor(surface, "VERB+PRON", cls,
              CharSpan{utf8::Length(v), utf8::Length(surface)});
    } else {
      Verb();
      if (inject) NounPhrase((cls + 1 + static_cast<int>(rng_.Below(kClasses.size() - 1))) % 4);
      Anaphor(kClasses[cls].pronoun, "PRON", cls, std::nullopt);
    }
    Particle();
    NounPhrase(RandomClass());
  }

  void Anaphor(const std::string &surface, const std::string &pos, int cls,
               std::optional<CharSpan> span) {
    // Gold: the most recent preceding mention of the pronoun's class.
    const Mention *gold = nullptr;
    for (auto it = mentions_.rbegin(); it != mentions_.rend(); ++it) {
      if (it->cls == cls) {
        gold = &*it;
        break;
      }
    }
    WordItem &ant = doc_.sentences[gold->location.sentence].words[gold->location.word];
    if (!ant.antecedent_id) {
      ant.role = Role::kAntecedent;
      ant.antecedent_id = "e" + std::to_string(++next_id_);
    }
    WordItem w{surface, pos, Role::kAnaphor, {}, ant.antecedent_id, span};
    words().push_back(std::move(w));
    const AgreementClass &c = kClasses[cls];
    MorphFeatures pm{c.gender, c.number, Person::kThird, true};
    if (span) {
      AddLexicon(surface, pos, MorphFeatures{});
      AddLexicon(c.clitic, "PRON", pm);
    } else {
      AddLexicon(surface, pos, pm);
    }
  }

  void AddLexicon(const std::string &surface, const std::string &pos, const MorphFeatures &m) {
    if (lexicon_.Find(surface) == nullptr) lexicon_.Add(surface, LexiconEntry{pos, m});
  }

  const SynthOptions &options_;
  Rng &rng_;
  const std::vector<std::string> &nouns_;
  const std::array<std::vector<std::string>, 4> &unmarked_;
  const std::vector<std::string> &adjectives_;
  const std::vector<std::string> &verbs_;
  Lexicon &lexicon_;
  Document doc_;
  std::vector<Mention> mentions_;
  int next_id_ = 0;
};

}  // namespace

SynthCorpus GenerateSynthCorpus(const SynthOptions &options) {
  options.Validate();
  Rng rng(options.seed);
  std::vector<std::string> roots = MakeRoots(rng, 2 * options.vocab + 20);
  std::vector<std::string> nouns(roots.begin(), roots.begin() + options.vocab);
  // Lexical-class nouns: four letters, class fixed per root.
  std::array<std::vector<std::string>, 4> unmarked;
  for (int i = 0; i < options.vocab; ++i)
    unmarked[i % 4].push_back(roots[options.vocab + i] + kLetters[rng.Below(kLetters.size())]);
  const auto tail = roots.begin() + 2 * options.vocab;
  std::vector<std::string> adjectives(tail, tail + 10);
  std::vector<std::string> verbs;
  for (auto it = tail + 10; it != roots.end(); ++it) verbs.push_back("ي" + *it);
  SynthCorpus corpus;
  // Pronoun entries first so a noisy noun can never shadow them.
  for (const AgreementClass &c : kClasses) {
    MorphFeatures pm{c.gender, c.number, Person::kThird, true};
    corpus.lexicon.Add(c.pronoun, LexiconEntry{"PRON", pm});
    corpus.lexicon.Add(c.clitic, LexiconEntry{"PRON", pm});
  }
  for (int d = 0; d < options.docs; ++d) {
    char id[32];
    std::snprintf(id, sizeof(id), "synth%04d", d);
    DocBuilder builder(options, rng, nouns, unmarked, adjectives, verbs, corpus.lexicon);
    corpus.docs.push_back(builder.Build(id));
  }
  return corpus;
}

void WriteSynthCorpus(const SynthCorpus &corpus, const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "corpus", ec);
  if (ec) throw IoError("cannot create " + (dir / "corpus").string() + ": " + ec.message());
  for (const Document &doc : corpus.docs) SaveDocument(doc, dir / "corpus" / (doc.doc_id + ".json"));
  std::ofstream out(dir / "lexicon.json", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "lexicon.json").string());
  out << corpus.lexicon.ToJson() << '\n';
}

}  // namespace pronres
