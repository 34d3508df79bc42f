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

// Token-level encoding of resolution instances: word/token alignment, the
// anaphor and candidate indicator features, targets and the candidate mask.

#ifndef PRONRES_ENCODING_H_
#define PRONRES_ENCODING_H_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pronres/candidates.h"
#include "pronres/corpus.h"

namespace pronres {

// Half-open token range.
struct TokenSpan {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool operator==(const TokenSpan &) const = default;
};

struct ProviderOutput {
  std::vector<std::string> tokens;
  Eigen::MatrixXd embeddings;      // tokens x dim
  std::vector<CharSpan> offsets;   // code-point span of each token; begin < 0 marks a special marker
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual int max_tokens() const = 0;
  // Whether one instance may be used from several workers at once.
  virtual bool shareable() const = 0;
  virtual ProviderOutput Embed(std::string_view text) const = 0;
  virtual int CountTokens(std::string_view text) const {
    return static_cast<int>(Embed(text).tokens.size());
  }
};

struct StubProviderOptions {
  int dim = 32;
  int max_tokens = 512;
  uint64_t seed = 7;
  bool split_affixes = true;  // peel off the definite article and common suffixes
  int max_piece = 0;          // split stems into pieces of at most this many code points
  bool markers = false;       // emit [CLS] ... [SEP]
};

// Deterministic provider: each token's vector is a seeded hash of its surface
// with entries in [-1, 1].
class StubProvider : public EmbeddingProvider {
 public:
  explicit StubProvider(StubProviderOptions options = {});
  std::string name() const override { return "stub"; }
  int dim() const override { return options_.dim; }
  int max_tokens() const override { return options_.max_tokens; }
  bool shareable() const override { return true; }
  ProviderOutput Embed(std::string_view text) const override;
  int CountTokens(std::string_view text) const override;

  const StubProviderOptions &options() const { return options_; }

  static Eigen::VectorXd TokenVector(std::string_view token, int dim, uint64_t seed);

 private:
  std::vector<std::pair<std::string, CharSpan>> Tokenize(std::string_view text) const;

  StubProviderOptions options_;
};

struct TokenAlignment {
  std::vector<TokenSpan> word_to_tokens;
  std::vector<int> token_word;         // -1 for special markers
  std::vector<CharSpan> token_chars;   // offsets into the joined paragraph text
  std::vector<CharSpan> word_chars;
  int total_tokens = 0;

  int num_words() const { return static_cast<int>(word_to_tokens.size()); }
};

// Words are joined with single spaces; returns the code-point range of each word.
std::string JoinWords(const std::vector<std::string> &words, std::vector<CharSpan> *ranges);

// Assigns each token to the word whose character range contains the token's
// start offset. Throws AlignmentError for tokens crossing a word boundary.
TokenAlignment Align(const std::vector<std::string> &words,
                     const std::vector<CharSpan> &token_offsets);

struct TokenFlags {
  std::vector<uint8_t> anaphor;    // z
  std::vector<uint8_t> candidate;  // c
};

// `anaphor_span` is relative to the anaphor word. For attached pronouns only
// the tokens that isolate the clitic are flagged; otherwise every token of
// the containing word.
TokenFlags BuildFlags(const TokenAlignment &alignment, int anaphor_word,
                      const std::optional<CharSpan> &anaphor_span,
                      const std::vector<int> &candidate_words);

struct VariantFlags {
  bool append = false;
  bool mask = false;
  bool filter = false;
  bool operator==(const VariantFlags &) const = default;
};

std::string VariantName(const VariantFlags &v);

struct EncodedExample {
  std::string instance_id;
  std::string doc_id;
  Eigen::MatrixXd x;                   // rows x (dim + 2): [v; z; c]
  std::vector<uint8_t> y;
  std::vector<uint8_t> candidate_mask;
  TokenAlignment alignment;
  std::optional<TokenSpan> appended_span;

  int anaphor_word = 0;
  std::optional<int> gold_word;
  std::vector<int> candidate_words;

  int rows() const { return static_cast<int>(x.rows()); }
  int real_tokens() const { return alignment.total_tokens; }
  int dim() const { return static_cast<int>(x.cols()) - 2; }
};

// Embeds the space-joined paragraph once; the append variant copies the
// anaphor rows to the end with c = 0, Y = 0 and mask = 0.
EncodedExample Assemble(const ResolutionInstance &instance, const EmbeddingProvider &provider,
                        bool append_anaphor);

// Candidate list used by a variant: agreement-filtered when `filter` is set.
ResolutionInstance WithVariantCandidates(const ResolutionInstance &instance,
                                         const VariantFlags &variant);

struct WindowStats {
  int truncated = 0;
  int excluded = 0;  // gold fell outside the window
};

// Drops whole leading sentences until the paragraph fits the provider's
// token budget. The anaphor sentence is never dropped. Returns nullopt when
// the gold antecedent falls outside the window.
std::optional<ResolutionInstance> FitToBudget(const ResolutionInstance &instance,
                                              const EmbeddingProvider &provider,
                                              WindowStats *stats = nullptr);

// Cache record: X as float32 nested arrays, Y/mask as 0/1 arrays, alignment
// spans as [begin, end] pairs.
std::string EncodedExampleToJson(const EncodedExample &example);
EncodedExample EncodedExampleFromJson(std::string_view json);

struct ProviderConfig {
  std::string name;
  StubProviderOptions stub;
};

// Registered providers: "stub".
std::unique_ptr<EmbeddingProvider> MakeProvider(const ProviderConfig &config);

}  // namespace pronres

#endif  // PRONRES_ENCODING_H_
