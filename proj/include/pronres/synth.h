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


// Synthetic Arabic-like corpus with pronoun/antecedent annotation and a
// matching lexicon. Nouns come in four agreement classes marked by suffix
// (masculine/feminine x singular/plural); each pronoun refers to the most
// recent preceding noun of its class.

#ifndef PRONRES_SYNTH_H_
#define PRONRES_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pronres/corpus.h"
#include "pronres/morphology.h"

namespace pronres {

struct SynthOptions {
  int docs = 20;
  uint64_t seed = 1;
  int min_sentences = 4;
  int max_sentences = 6;
  int vocab = 40;                // noun roots
  double ambiguity = 0.0;        // rate of a disagreeing noun right before a pronoun
  double agreement_noise = 0.0;  // rate of lexicon nouns with randomized gender/number
  double attached_rate = 0.5;    // clitic instead of a detached pronoun
  double adjective_rate = 0.3;
  double anaphor_rate = 0.8;     // sentences after the lead that contain a pronoun
  int lead_sentences = 1;        // leading sentences without pronouns
  int nouns_per_sentence = 2;
  double unmarked_rate = 0.0;    // nouns whose class is lexical (no agreement suffix)

  void Validate() const;  // throws ConfigError
};

struct SynthCorpus {
  std::vector<Document> docs;
  Lexicon lexicon;
};

SynthCorpus GenerateSynthCorpus(const SynthOptions &options);

// Writes <dir>/corpus/<doc_id>.json and <dir>/lexicon.json.
void WriteSynthCorpus(const SynthCorpus &corpus, const std::filesystem::path &dir);

}  // namespace pronres

#endif  // PRONRES_SYNTH_H_
