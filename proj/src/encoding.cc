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

#include "pronres/encoding.h"

#include <algorithm>

#include "json.hpp"
#include "pronres/error.h"
#include "pronres/random.h"
#include "pronres/utf8.h"

namespace pronres {

namespace {

uint64_t HashString(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const std::vector<std::string> &Suffixes() {
  // Longest first.
  static const auto *suffixes = new std::vector<std::string>{
      "هما", "ات", "ون", "ين", "ان", "ها", "هم", "هن", "ة", "ه"};
  return *suffixes;
}

}  // namespace

StubProvider::StubProvider(StubProviderOptions options) : options_(options) {
  if (options_.dim <= 0) throw ConfigError("provider dimension must be positive");
  if (options_.max_tokens <= 0) throw ConfigError("provider token budget must be positive");
}

Eigen::VectorXd StubProvider::TokenVector(std::string_view token, int dim, uint64_t seed) {
  Eigen::VectorXd v(dim);
  const uint64_t h = HashString(token);
  for (int k = 0; k < dim; ++k) {
    uint64_t bits = Mix64(h ^ Mix64(seed * 0x100000001b3ULL + static_cast<uint64_t>(k)));
    double unit = static_cast<double>(bits >> 11) * (1.0 / 9007199254740992.0);
    v[k] = 2.0 * unit - 1.0;
  }
  return v;
}

std::vector<std::pair<std::string, CharSpan>> StubProvider::Tokenize(std::string_view text) const {
  std::vector<std::pair<std::string, CharSpan>> tokens;
  std::vector<std::string> chars = utf8::CodePoints(text);
  const int n = static_cast<int>(chars.size());
  auto piece = [&](int b, int e) {
    std::string s;
    for (int i = b; i < e; ++i) s += chars[i];
    return s;
  };
  auto emit_stem = [&](int b, int e) {
    if (options_.max_piece <= 0) {
      tokens.push_back({piece(b, e), {b, e}});
      return;
    }
    for (int i = b; i < e; i += options_.max_piece) {
      int j = std::min(e, i + options_.max_piece);
      tokens.push_back({piece(i, j), {i, j}});
    }
  };
  int i = 0;
  while (i < n) {
    if (chars[i] == " ") {
      ++i;
      continue;
    }
    int b = i;
    while (i < n && chars[i] != " ") ++i;
    int e = i;
    if (!options_.split_affixes) {
      emit_stem(b, e);
      continue;
    }
    int stem_b = b, stem_e = e;
    if (e - b > 3 && chars[b] == "ا" && chars[b + 1] == "ل") {
      tokens.push_back({piece(b, b + 2), {b, b + 2}});
      stem_b = b + 2;
    }
    std::optional<std::pair<std::string, CharSpan>> suffix;
    for (const std::string &suf : Suffixes()) {
      int len = utf8::Length(suf);
      if (stem_e - stem_b >= len + 2 && piece(stem_e - len, stem_e) == suf) {
        suffix = std::make_pair(suf, CharSpan{stem_e - len, stem_e});
        stem_e -= len;
        break;
      }
    }
    emit_stem(stem_b, stem_e);
    if (suffix) tokens.push_back(*suffix);
  }
  return tokens;
}

ProviderOutput StubProvider::Embed(std::string_view text) const {
  auto pieces = Tokenize(text);
  ProviderOutput out;
  if (options_.markers) {
    out.tokens.push_back("[CLS]");
    out.offsets.push_back({-1, -1});
  }
  for (auto &[tok, span] : pieces) {
    out.tokens.push_back(tok);
    out.offsets.push_back(span);
  }
  if (options_.markers) {
    out.tokens.push_back("[SEP]");
    out.offsets.push_back({-1, -1});
  }
  out.embeddings.resize(static_cast<Eigen::Index>(out.tokens.size()), options_.dim);
  for (size_t t = 0; t < out.tokens.size(); ++t) {
    out.embeddings.row(static_cast<Eigen::Index>(t)) =
        TokenVector(out.tokens[t], options_.dim, options_.seed).transpose();
  }
  return out;
}

int StubProvider::CountTokens(std::string_view text) const {
  return static_cast<int>(Tokenize(text).size()) + (options_.markers ? 2 : 0);
}

// ---------------------------------------------------------------------------

std::string JoinWords(const std::vector<std::string> &words, std::vector<CharSpan> *ranges) {
  std::string text;
  int pos = 0;
  if (ranges) ranges->clear();
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) {
      text.push_back(' ');
      ++pos;
    }
    int len = utf8::Length(words[i]);
    if (ranges) ranges->push_back({pos, pos + len});
    text += words[i];
    pos += len;
  }
  return text;
}

TokenAlignment Align(const std::vector<std::string> &words,
                     const std::vector<CharSpan> &token_offsets) {
  TokenAlignment a;
  JoinWords(words, &a.word_chars);
  const int m = static_cast<int>(token_offsets.size());
  const int n = static_cast<int>(words.size());
  a.total_tokens = m;
  a.token_chars = token_offsets;
  a.token_word.assign(m, -1);
  std::vector<int> first(n, -1), last(n, -1);
  int previous_word = -1;
  int previous_token = -1;
  for (int t = 0; t < m; ++t) {
    const CharSpan &span = token_offsets[t];
    if (span.begin < 0) continue;  // marker
    auto it = std::upper_bound(a.word_chars.begin(), a.word_chars.end(), span.begin,
                               [](int pos, const CharSpan &w) { return pos < w.begin; });
    int w = static_cast<int>(it - a.word_chars.begin()) - 1;
    if (w < 0 || span.begin >= a.word_chars[w].end) {
      throw AlignmentError("token " + std::to_string(t) + " starts at offset " +
                           std::to_string(span.begin) + ", outside every word");
    }
    if (span.end > a.word_chars[w].end || span.end < span.begin) {
      throw AlignmentError("token " + std::to_string(t) + " crosses the boundary of word " +
                           std::to_string(w));
    }
    if (w < previous_word) {
      throw AlignmentError("token " + std::to_string(t) + " maps to word " + std::to_string(w) +
                           " after word " + std::to_string(previous_word));
    }
    if (w == previous_word && previous_token != t - 1) {
      throw AlignmentError("tokens of word " + std::to_string(w) + " are not contiguous at token " +
                           std::to_string(t));
    }
    a.token_word[t] = w;
    if (first[w] < 0) first[w] = t;
    last[w] = t;
    previous_word = w;
    previous_token = t;
  }
  a.word_to_tokens.resize(n);
  int cursor = 0;
  while (cursor < m && a.token_word[cursor] < 0) ++cursor;  // leading markers
  for (int w = 0; w < n; ++w) {
    if (first[w] >= 0) {
      a.word_to_tokens[w] = {first[w], last[w] + 1};
      cursor = last[w] + 1;
    } else {
      a.word_to_tokens[w] = {cursor, cursor};
    }
  }
  return a;
}

TokenFlags BuildFlags(const TokenAlignment &alignment, int anaphor_word,
                      const std::optional<CharSpan> &anaphor_span,
                      const std::vector<int> &candidate_words) {
  const int m = alignment.total_tokens;
  TokenFlags flags;
  flags.anaphor.assign(m, 0);
  flags.candidate.assign(m, 0);
  const TokenSpan word = alignment.word_to_tokens.at(anaphor_word);
  bool isolated = false;
  if (anaphor_span && anaphor_span->end > anaphor_span->begin) {
    const int base = alignment.word_chars[anaphor_word].begin;
    const int cb = base + anaphor_span->begin, ce = base + anaphor_span->end;
    // Tokens lying inside the clitic must tile it exactly.
    std::vector<int> inside;
    for (int t = word.begin; t < word.end; ++t) {
      const CharSpan &tc = alignment.token_chars[t];
      if (tc.begin >= cb && tc.end <= ce && tc.end > tc.begin) inside.push_back(t);
    }
    int covered = cb;
    for (int t : inside) {
      if (alignment.token_chars[t].begin != covered) break;
      covered = alignment.token_chars[t].end;
    }
    if (!inside.empty() && covered == ce) {
      isolated = true;
      for (int t : inside) flags.anaphor[t] = 1;
    }
  }
  if (!isolated) {
    for (int t = word.begin; t < word.end; ++t) flags.anaphor[t] = 1;
  }
  for (int w : candidate_words) {
    const TokenSpan span = alignment.word_to_tokens.at(w);
    for (int t = span.begin; t < span.end; ++t) flags.candidate[t] = 1;
  }
  return flags;
}

std::string VariantName(const VariantFlags &v) {
  if (!v.append && !v.mask && !v.filter) return "base";
  std::string name;
  auto add = [&](const char *part) {
    if (!name.empty()) name += "+";
    name += part;
  };
  if (v.append) add("append");
  if (v.mask) add("mask");
  if (v.filter) add("filter");
  return name;
}

EncodedExample Assemble(const ResolutionInstance &instance, const EmbeddingProvider &provider,
                        bool append_anaphor) {
  std::vector<std::string> surfaces;
  surfaces.reserve(instance.paragraph.size());
  for (const WordItem &w : instance.paragraph) surfaces.push_back(w.surface);
  std::string text = JoinWords(surfaces, nullptr);
  ProviderOutput out = provider.Embed(text);
  const int m = static_cast<int>(out.tokens.size());
  if (m > provider.max_tokens()) {
    throw ShapeError("instance " + instance.id + " has " + std::to_string(m) +
                     " tokens, over the provider budget of " +
                     std::to_string(provider.max_tokens()));
  }
  if (out.embeddings.rows() != m || out.embeddings.cols() != provider.dim()) {
    throw ShapeError("provider '" + provider.name() + "' returned embeddings of shape " +
                     std::to_string(out.embeddings.rows()) + "x" +
                     std::to_string(out.embeddings.cols()));
  }
  EncodedExample ex;
  ex.instance_id = instance.id;
  ex.doc_id = instance.doc_id;
  ex.alignment = Align(surfaces, out.offsets);
  ex.anaphor_word = instance.anaphor;
  ex.gold_word = instance.gold;
  ex.candidate_words = instance.CandidateIndices();
  TokenFlags flags = BuildFlags(ex.alignment, instance.anaphor, instance.anaphor_span,
                                ex.candidate_words);
  ex.y.assign(m, 0);
  if (instance.gold) {
    TokenSpan gold = ex.alignment.word_to_tokens.at(*instance.gold);
    if (gold.size() == 0)
      throw AlignmentError("instance " + instance.id + ": gold antecedent has no tokens");
    for (int t = gold.begin; t < gold.end; ++t) ex.y[t] = 1;
  }
  ex.candidate_mask = flags.candidate;

  std::vector<int> appended;
  if (append_anaphor) {
    for (int t = 0; t < m; ++t) {
      if (flags.anaphor[t]) appended.push_back(t);
    }
  }
  const int d = provider.dim();
  const int rows = m + static_cast<int>(appended.size());
  ex.x.resize(rows, d + 2);
  ex.x.leftCols(d).topRows(m) = out.embeddings;
  for (int t = 0; t < m; ++t) {
    ex.x(t, d) = flags.anaphor[t];
    ex.x(t, d + 1) = flags.candidate[t];
  }
  for (size_t k = 0; k < appended.size(); ++k) {
    const int row = m + static_cast<int>(k);
    ex.x.row(row) = ex.x.row(appended[k]);
    ex.x(row, d + 1) = 0.0;
    ex.y.push_back(0);
    ex.candidate_mask.push_back(0);
  }
  if (!appended.empty()) ex.appended_span = TokenSpan{m, rows};
  return ex;
}

ResolutionInstance WithVariantCandidates(const ResolutionInstance &instance,
                                         const VariantFlags &variant) {
  if (!variant.filter) return instance;
  ResolutionInstance out = instance;
  out.candidates = AgreementFilter(instance.candidates, instance.anaphor_morph);
  return out;
}

std::optional<ResolutionInstance> FitToBudget(const ResolutionInstance &instance,
                                              const EmbeddingProvider &provider,
                                              WindowStats *stats) {
  auto count = [&](const ResolutionInstance &inst) {
    std::vector<std::string> surfaces;
    for (const WordItem &w : inst.paragraph) surfaces.push_back(w.surface);
    return provider.CountTokens(JoinWords(surfaces, nullptr));
  };
  if (count(instance) <= provider.max_tokens()) return instance;
  const int anaphor_sentence = instance.word_sentence[instance.anaphor];
  ResolutionInstance inst = instance;
  while (count(inst) > provider.max_tokens() && inst.word_sentence.front() < anaphor_sentence) {
    int drop_sentence = inst.word_sentence.front();
    int k = 0;
    while (k < static_cast<int>(inst.word_sentence.size()) && inst.word_sentence[k] == drop_sentence)
      ++k;
    inst.paragraph.erase(inst.paragraph.begin(), inst.paragraph.begin() + k);
    inst.word_sentence.erase(inst.word_sentence.begin(), inst.word_sentence.begin() + k);
    inst.word_location.erase(inst.word_location.begin(), inst.word_location.begin() + k);
    inst.anaphor -= k;
    if (inst.gold) *inst.gold -= k;
  }
  if (stats) ++stats->truncated;
  std::vector<Candidate> kept;
  for (const Candidate &c : inst.candidates) {
    if (c.location.sentence >= inst.word_sentence.front()) kept.push_back(c);
  }
  inst.candidates = std::move(kept);
  if (inst.gold && *inst.gold < 0) {
    if (stats) ++stats->excluded;
    return std::nullopt;
  }
  return inst;
}

// ---------------------------------------------------------------------------

std::string EncodedExampleToJson(const EncodedExample &ex) {
  nlohmann::ordered_json j;
  j["instance_id"] = ex.instance_id;
  j["doc_id"] = ex.doc_id;
  nlohmann::ordered_json x = nlohmann::ordered_json::array();
  for (int r = 0; r < ex.x.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < ex.x.cols(); ++c) row.push_back(static_cast<float>(ex.x(r, c)));
    x.push_back(std::move(row));
  }
  j["X"] = std::move(x);
  j["Y"] = ex.y;
  j["mask"] = ex.candidate_mask;
  nlohmann::ordered_json spans = nlohmann::ordered_json::array();
  for (const TokenSpan &s : ex.alignment.word_to_tokens) spans.push_back({s.begin, s.end});
  j["alignment"] = std::move(spans);
  nlohmann::ordered_json token_word = ex.alignment.token_word;
  j["token_word"] = std::move(token_word);
  nlohmann::ordered_json token_chars = nlohmann::ordered_json::array();
  for (const CharSpan &s : ex.alignment.token_chars) token_chars.push_back({s.begin, s.end});
  j["token_chars"] = std::move(token_chars);
  nlohmann::ordered_json word_chars = nlohmann::ordered_json::array();
  for (const CharSpan &s : ex.alignment.word_chars) word_chars.push_back({s.begin, s.end});
  j["word_chars"] = std::move(word_chars);
  j["appended_span"] = ex.appended_span
                           ? nlohmann::ordered_json::array({ex.appended_span->begin,
                                                            ex.appended_span->end})
                           : nlohmann::ordered_json(nullptr);
  j["anaphor_word"] = ex.anaphor_word;
  j["gold_word"] = ex.gold_word ? nlohmann::ordered_json(*ex.gold_word)
                                : nlohmann::ordered_json(nullptr);
  j["candidate_words"] = ex.candidate_words;
  return j.dump();
}

EncodedExample EncodedExampleFromJson(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json.begin(), json.end());
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("encoded example: ") + e.what());
  }
  try {
    EncodedExample ex;
    ex.instance_id = j.at("instance_id").get<std::string>();
    ex.doc_id = j.at("doc_id").get<std::string>();
    const auto &x = j.at("X");
    const int rows = static_cast<int>(x.size());
    const int cols = rows > 0 ? static_cast<int>(x[0].size()) : 0;
    ex.x.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      if (static_cast<int>(x[r].size()) != cols) throw ShapeError("ragged X row " + std::to_string(r));
      for (int c = 0; c < cols; ++c) ex.x(r, c) = x[r][c].get<float>();
    }
    ex.y = j.at("Y").get<std::vector<uint8_t>>();
    ex.candidate_mask = j.at("mask").get<std::vector<uint8_t>>();
    for (const auto &s : j.at("alignment"))
      ex.alignment.word_to_tokens.push_back({s[0].get<int>(), s[1].get<int>()});
    ex.alignment.token_word = j.at("token_word").get<std::vector<int>>();
    for (const auto &s : j.at("token_chars"))
      ex.alignment.token_chars.push_back({s[0].get<int>(), s[1].get<int>()});
    for (const auto &s : j.at("word_chars"))
      ex.alignment.word_chars.push_back({s[0].get<int>(), s[1].get<int>()});
    ex.alignment.total_tokens = static_cast<int>(ex.alignment.token_word.size());
    if (!j.at("appended_span").is_null()) {
      const auto &s = j["appended_span"];
      ex.appended_span = TokenSpan{s[0].get<int>(), s[1].get<int>()};
    }
    ex.anaphor_word = j.at("anaphor_word").get<int>();
    if (!j.at("gold_word").is_null()) ex.gold_word = j["gold_word"].get<int>();
    ex.candidate_words = j.at("candidate_words").get<std::vector<int>>();
    if (static_cast<int>(ex.y.size()) != rows || static_cast<int>(ex.candidate_mask.size()) != rows)
      throw ShapeError("Y/mask length does not match X");
    return ex;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("encoded example: ") + e.what());
  }
}

std::unique_ptr<EmbeddingProvider> MakeProvider(const ProviderConfig &config) {
  if (config.name.empty()) throw ConfigError("provider name is required");
  if (config.name == "stub") return std::make_unique<StubProvider>(config.stub);
  throw ConfigError("unknown embedding provider '" + config.name + "'");
}

}  // namespace pronres
