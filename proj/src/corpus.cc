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

#include "pronres/corpus.h"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "pronres/error.h"
#include "pronres/random.h"
#include "pronres/utf8.h"

namespace pronres {

using ordered_json = nlohmann::ordered_json;

const char *RoleName(Role role) {
  switch (role) {
    case Role::kOrdinary: return "ordinary";
    case Role::kAnaphor: return "anaphor";
    case Role::kAntecedent: return "antecedent";
    case Role::kBoth: return "both";
  }
  return "ordinary";
}

Role ParseRole(std::string_view name) {
  if (name == "ordinary") return Role::kOrdinary;
  if (name == "anaphor") return Role::kAnaphor;
  if (name == "antecedent") return Role::kAntecedent;
  if (name == "both") return Role::kBoth;
  throw ValidationError("unknown role '" + std::string(name) + "'");
}

int Document::NumWords() const {
  int n = 0;
  for (const Sentence &s : sentences) n += static_cast<int>(s.words.size());
  return n;
}

CleaningStats &CleaningStats::operator+=(const CleaningStats &other) {
  dangling += other.dangling;
  chains_collapsed += other.chains_collapsed;
  non_pronominal_dropped += other.non_pronominal_dropped;
  kept += other.kept;
  return *this;
}

namespace {

std::vector<std::string> TagSegments(std::string_view pos) {
  std::vector<std::string> segments;
  std::string current;
  for (char ch : pos) {
    if (ch == '+') {
      segments.push_back(current);
      current.clear();
    } else {
      current.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
  }
  segments.push_back(current);
  return segments;
}

bool IsNounSegment(const std::string &s) {
  static const std::set<std::string> kNouns = {
      "NOUN", "NOUN_PROP", "NOUN_NUM", "NOUN_QUANT", "PROPN", "NN",
      "NNS",  "NNP",       "NNPS",     "DTNN",       "DTNNS", "DTNNP",
      "DTNNPS", "NP"};
  return kNouns.count(s) > 0;
}

bool IsPronounSegment(const std::string &s) {
  return s == "PRP" || s == "PRP$" || s.rfind("PRON", 0) == 0;
}

}  // namespace

bool IsNominalTag(std::string_view pos) {
  return IsNounSegment(TagSegments(pos).front());
}

bool IsPronounTag(std::string_view pos) {
  for (const std::string &s : TagSegments(pos)) {
    if (IsPronounSegment(s)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// XML conversion.

namespace {

struct XmlState {
  XML_Parser parser = nullptr;
  std::string source;
  Document doc;
  std::string error;
  ErrorCode error_code = ErrorCode::kValidation;

  bool seen_root = false;
  bool in_sentence = false;
  std::vector<std::string> stack;

  // Wrapper annotations that apply to the next <w>.
  struct Pending {
    std::string tag;
    std::string id;
    int words = 0;
  };
  std::vector<Pending> wrappers;

  // Current word item.
  bool in_word = false;
  WordItem word;
  std::string raw_text;
  int ptr_begin_byte = -1;
  int ptr_end_byte = -1;
  bool in_inner_ptr = false;
  std::string inner_ptr_ref;
  bool inner_exp = false;
  std::string inner_exp_id;

  void Fail(ErrorCode code, const std::string &message) {
    if (!error.empty()) return;
    error_code = code;
    error = source + ":" +
            std::to_string(XML_GetCurrentLineNumber(parser)) + ": " + message;
    XML_StopParser(parser, XML_FALSE);
  }
};

std::string Attribute(const XML_Char **attrs, std::initializer_list<const char *> names) {
  for (int i = 0; attrs[i] != nullptr; i += 2) {
    for (const char *name : names) {
      if (std::string_view(attrs[i]) == name) return attrs[i + 1];
    }
  }
  return {};
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void AssignRole(WordItem &w) {
  bool ana = w.refers_to.has_value();
  bool ant = w.antecedent_id.has_value();
  w.role = ana && ant ? Role::kBoth
           : ana      ? Role::kAnaphor
           : ant      ? Role::kAntecedent
                      : Role::kOrdinary;
}

// Collapses whitespace in `raw` and maps the byte range of an inner PTR onto
// code-point offsets of the normalized text.
void FinishWordText(XmlState &st) {
  std::string out;
  int out_len = 0;
  bool pending_space = false;
  int span_begin = -1, span_end = -1;
  const std::string &raw = st.raw_text;
  for (size_t i = 0; i <= raw.size(); ++i) {
    if (static_cast<int>(i) == st.ptr_begin_byte) {
      span_begin = out_len + ((pending_space && out_len > 0) ? 1 : 0);
    }
    if (static_cast<int>(i) == st.ptr_end_byte) span_end = out_len;
    if (i == raw.size()) break;
    char c = raw[i];
    if (IsSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && out_len > 0) {
      out.push_back(' ');
      ++out_len;
    }
    pending_space = false;
    out.push_back(c);
    // Count code points by lead bytes.
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++out_len;
  }
  st.word.surface = out;
  if (st.ptr_begin_byte >= 0) {
    if (span_end < span_begin) span_end = span_begin;
    st.word.anaphor_span = CharSpan{span_begin, span_end};
  }
}

void XMLCALL OnStart(void *data, const XML_Char *name, const XML_Char **attrs) {
  auto &st = *static_cast<XmlState *>(data);
  std::string tag(name);
  if (!st.seen_root) {
    if (tag != "document") {
      st.Fail(ErrorCode::kValidation, "unknown tag <" + tag + "> (expected <document>)");
      return;
    }
    st.seen_root = true;
    std::string id = Attribute(attrs, {"id", "ID"});
    if (!id.empty()) st.doc.doc_id = id;
    st.stack.push_back(tag);
    return;
  }
  if (tag == "s") {
    if (st.in_sentence) {
      st.Fail(ErrorCode::kValidation, "nested <s>");
      return;
    }
    st.in_sentence = true;
    Sentence s;
    s.index = static_cast<int>(st.doc.sentences.size());
    st.doc.sentences.push_back(std::move(s));
  } else if (tag == "w") {
    if (!st.in_sentence || st.in_word) {
      st.Fail(ErrorCode::kValidation, "<w> must appear directly inside <s>");
      return;
    }
    st.in_word = true;
    st.word = WordItem{};
    st.word.pos = Attribute(attrs, {"pos", "POS"});
    if (st.word.pos.empty()) {
      st.Fail(ErrorCode::kValidation, "<w> without pos attribute");
      return;
    }
    st.raw_text.clear();
    st.ptr_begin_byte = st.ptr_end_byte = -1;
    st.inner_exp = false;
    st.inner_ptr_ref.clear();
    for (auto &p : st.wrappers) {
      if (++p.words > 1) {
        st.Fail(ErrorCode::kValidation,
                "<" + p.tag + "> must wrap exactly one word item");
        return;
      }
    }
  } else if (tag == "EXP" || tag == "PTR") {
    std::string id = tag == "EXP" ? Attribute(attrs, {"id", "ID"})
                                  : Attribute(attrs, {"ref", "REF"});
    if (id.empty()) {
      st.Fail(ErrorCode::kValidation,
              "<" + tag + "> without " + (tag == "EXP" ? "id" : "ref") +
                  " attribute");
      return;
    }
    if (st.in_word) {
      if (tag == "PTR") {
        if (st.ptr_begin_byte >= 0 || st.word.refers_to) {
          st.Fail(ErrorCode::kValidation, "word carries more than one anaphor");
          return;
        }
        st.in_inner_ptr = true;
        st.inner_ptr_ref = id;
        st.ptr_begin_byte = static_cast<int>(st.raw_text.size());
      } else {
        st.inner_exp = true;
        st.inner_exp_id = id;
      }
    } else {
      if (!st.in_sentence) {
        st.Fail(ErrorCode::kValidation, "<" + tag + "> outside <s>");
        return;
      }
      st.wrappers.push_back({tag, id, 0});
    }
  } else {
    st.Fail(ErrorCode::kValidation, "unknown tag <" + tag + ">");
    return;
  }
  st.stack.push_back(tag);
}

void XMLCALL OnEnd(void *data, const XML_Char *name) {
  auto &st = *static_cast<XmlState *>(data);
  std::string tag(name);
  if (!st.stack.empty()) st.stack.pop_back();
  if (tag == "s") {
    st.in_sentence = false;
  } else if (tag == "w") {
    st.in_word = false;
    FinishWordText(st);
    if (st.word.surface.empty()) {
      st.Fail(ErrorCode::kValidation, "empty word item");
      return;
    }
    for (const auto &p : st.wrappers) {
      if (p.tag == "EXP") {
        if (st.word.antecedent_id) {
          st.Fail(ErrorCode::kValidation, "word carries two antecedent ids");
          return;
        }
        st.word.antecedent_id = p.id;
      } else {
        if (st.word.refers_to) {
          st.Fail(ErrorCode::kValidation, "word carries more than one anaphor");
          return;
        }
        st.word.refers_to = p.id;
      }
    }
    if (!st.inner_ptr_ref.empty()) {
      if (st.word.refers_to) {
        st.Fail(ErrorCode::kValidation, "word carries more than one anaphor");
        return;
      }
      st.word.refers_to = st.inner_ptr_ref;
    }
    if (st.inner_exp) {
      if (st.word.antecedent_id) {
        st.Fail(ErrorCode::kValidation, "word carries two antecedent ids");
        return;
      }
      st.word.antecedent_id = st.inner_exp_id;
    }
    AssignRole(st.word);
    st.doc.sentences.back().words.push_back(std::move(st.word));
  } else if (tag == "EXP" || tag == "PTR") {
    if (st.in_word) {
      if (tag == "PTR") {
        st.in_inner_ptr = false;
        st.ptr_end_byte = static_cast<int>(st.raw_text.size());
      }
    } else if (!st.wrappers.empty()) {
      if (st.wrappers.back().words == 0) {
        st.Fail(ErrorCode::kValidation,
                "<" + tag + "> must wrap exactly one word item");
        return;
      }
      st.wrappers.pop_back();
    }
  }
}

void XMLCALL OnText(void *data, const XML_Char *s, int len) {
  auto &st = *static_cast<XmlState *>(data);
  std::string_view text(s, len);
  if (st.in_word) {
    st.raw_text.append(text);
    return;
  }
  if (std::any_of(text.begin(), text.end(), [](char c) { return !IsSpace(c); })) {
    st.Fail(ErrorCode::kValidation, "text outside a word item");
  }
}

std::string StemOf(std::string_view source) {
  std::filesystem::path p{std::string(source)};
  return p.stem().string();
}

}  // namespace

Document ConvertXml(std::string_view xml, std::string_view source_name) {
  XmlState st;
  st.source = std::string(source_name);
  st.doc.doc_id = StemOf(source_name);
  XML_Parser parser = XML_ParserCreate("UTF-8");
  st.parser = parser;
  XML_SetUserData(parser, &st);
  XML_SetElementHandler(parser, OnStart, OnEnd);
  XML_SetCharacterDataHandler(parser, OnText);
  XML_Status status = XML_Parse(parser, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  std::string parse_error;
  if (status == XML_STATUS_ERROR && st.error.empty()) {
    parse_error = st.source + ":" + std::to_string(XML_GetCurrentLineNumber(parser)) +
                  ": malformed XML: " + XML_ErrorString(XML_GetErrorCode(parser));
  }
  XML_ParserFree(parser);
  if (!st.error.empty()) {
    if (st.error_code == ErrorCode::kParse) throw ParseError(st.error);
    throw ValidationError(st.error);
  }
  if (!parse_error.empty()) throw ParseError(parse_error);
  if (!st.seen_root) throw ParseError(st.source + ":1: malformed XML: no root element");
  ValidateDocument(st.doc, st.source, /*strict=*/false);
  return st.doc;
}

Document ConvertXmlFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ConvertXml(buffer.str(), path.string());
}

// ---------------------------------------------------------------------------
// Cleaning.

namespace {

struct IdIndex {
  std::unordered_map<std::string, WordLocation> location;
  std::unordered_map<std::string, int> count;
};

IdIndex IndexIds(const Document &doc) {
  IdIndex index;
  for (const Sentence &s : doc.sentences) {
    for (int w = 0; w < static_cast<int>(s.words.size()); ++w) {
      const auto &id = s.words[w].antecedent_id;
      if (!id) continue;
      if (index.count[*id]++ == 0) index.location[*id] = {s.index, w};
    }
  }
  return index;
}

const WordItem &At(const Document &doc, WordLocation loc) {
  return doc.sentences[loc.sentence].words[loc.word];
}

WordItem &At(Document &doc, WordLocation loc) {
  return doc.sentences[loc.sentence].words[loc.word];
}

void DropRelation(WordItem &w) {
  w.refers_to.reset();
  w.anaphor_span.reset();
  w.role = w.antecedent_id ? Role::kAntecedent : Role::kOrdinary;
}

}  // namespace

std::pair<Document, CleaningStats> CleanDocument(const Document &doc) {
  Document out = doc;
  CleaningStats stats;
  IdIndex ids = IndexIds(doc);
  for (const Sentence &s : doc.sentences) {
    for (int w = 0; w < static_cast<int>(s.words.size()); ++w) {
      const WordItem &anaphor = s.words[w];
      if (!anaphor.refers_to) continue;
      WordLocation here{s.index, w};
      WordItem &target_word = At(out, here);
      auto it = ids.location.find(*anaphor.refers_to);
      if (it == ids.location.end()) {
        ++stats.dangling;
        DropRelation(target_word);
        continue;
      }
      if (!IsPronounTag(anaphor.pos) && !anaphor.anaphor_span) {
        ++stats.non_pronominal_dropped;
        DropRelation(target_word);
        continue;
      }
      // Walk the chain on the original graph until a nominal mention that
      // precedes the anaphor is found.
      std::set<std::string> visited;
      std::optional<std::string> gold;
      std::string current = *anaphor.refers_to;
      bool chained = At(doc, it->second).refers_to.has_value();
      while (visited.insert(current).second) {
        auto found = ids.location.find(current);
        if (found == ids.location.end()) break;
        const WordItem &mention = At(doc, found->second);
        if (found->second < here && IsNominalTag(mention.pos)) {
          gold = current;
          break;
        }
        if (!mention.refers_to) break;
        current = *mention.refers_to;
      }
      if (!gold) {
        ++stats.dangling;
        DropRelation(target_word);
        continue;
      }
      if (chained) ++stats.chains_collapsed;
      target_word.refers_to = *gold;
      ++stats.kept;
    }
  }
  return {std::move(out), stats};
}

std::vector<RelationRecord> Relations(const Document &doc) {
  IdIndex ids = IndexIds(doc);
  std::vector<RelationRecord> relations;
  for (const Sentence &s : doc.sentences) {
    for (int w = 0; w < static_cast<int>(s.words.size()); ++w) {
      const WordItem &word = s.words[w];
      if (!word.refers_to) continue;
      auto it = ids.location.find(*word.refers_to);
      if (it == ids.location.end()) continue;
      relations.push_back({{s.index, w}, it->second,
                           word.anaphor_span ? PronounKind::kAttached
                                             : PronounKind::kDetached});
    }
  }
  return relations;
}

void ValidateDocument(const Document &doc, std::string_view source, bool strict) {
  auto fail = [&](int sentence, const std::string &what) {
    throw ValidationError(std::string(source) + ": sentence " +
                          std::to_string(sentence) + ": " + what);
  };
  IdIndex ids = IndexIds(doc);
  for (int si = 0; si < static_cast<int>(doc.sentences.size()); ++si) {
    const Sentence &s = doc.sentences[si];
    if (s.index != si) fail(si, "sentence indices must be consecutive from 0");
    for (size_t w = 0; w < s.words.size(); ++w) {
      const WordItem &word = s.words[w];
      std::string where = "word " + std::to_string(w) + ": ";
      if (IsAnaphorRole(word.role) && !word.refers_to)
        fail(si, where + "role " + RoleName(word.role) + " requires ref");
      if (IsAntecedentRole(word.role) && !word.antecedent_id)
        fail(si, where + "role " + RoleName(word.role) + " requires ant_id");
      if (!IsAnaphorRole(word.role) && word.refers_to)
        fail(si, where + "ref set on a word whose role is " + RoleName(word.role));
      if (!IsAntecedentRole(word.role) && word.antecedent_id)
        fail(si, where + "ant_id set on a word whose role is " + RoleName(word.role));
      if (word.anaphor_span) {
        int len = utf8::Length(word.surface);
        const CharSpan &sp = *word.anaphor_span;
        if (sp.begin < 0 || sp.end < sp.begin || sp.end > len)
          fail(si, where + "span outside [0, len(surface)]");
      }
      if (word.antecedent_id && ids.count[*word.antecedent_id] > 1)
        fail(si, where + "duplicate ant_id '" + *word.antecedent_id + "'");
      if (strict && word.refers_to && ids.location.count(*word.refers_to) == 0)
        fail(si, where + "ref '" + *word.refers_to + "' resolves to no ant_id");
    }
  }
}

// ---------------------------------------------------------------------------
// JSON.

namespace {

ordered_json WordJson(const WordItem &w) {
  ordered_json j;
  j["w"] = w.surface;
  j["pos"] = w.pos;
  j["role"] = RoleName(w.role);
  j["ant_id"] = w.antecedent_id ? ordered_json(*w.antecedent_id) : ordered_json(nullptr);
  j["ref"] = w.refers_to ? ordered_json(*w.refers_to) : ordered_json(nullptr);
  j["span"] = w.anaphor_span
                  ? ordered_json::array({w.anaphor_span->begin, w.anaphor_span->end})
                  : ordered_json(nullptr);
  return j;
}

std::optional<std::string> OptionalString(const nlohmann::json &j, const char *key,
                                          const std::string &where) {
  if (!j.contains(key)) throw ValidationError(where + "missing field '" + key + "'");
  const auto &v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw ValidationError(where + "field '" + key + "' must be string or null");
  return v.get<std::string>();
}

}  // namespace

std::string SerializeDocument(const Document &doc) {
  std::string out = "{\"doc_id\": " + ordered_json(doc.doc_id).dump() +
                    ", \"sentences\": [";
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    out += s == 0 ? "\n  [" : ",\n  [";
    const auto &words = doc.sentences[s].words;
    for (size_t w = 0; w < words.size(); ++w) {
      out += w == 0 ? "\n    " : ",\n    ";
      out += WordJson(words[w]).dump();
    }
    out += "\n  ]";
  }
  out += doc.sentences.empty() ? "]}\n" : "\n]}\n";
  return out;
}

Document ParseDocumentJson(std::string_view json, std::string_view source, bool strict) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json.begin(), json.end());
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
  std::string src(source);
  if (!j.is_object() || !j.contains("doc_id") || !j["doc_id"].is_string() ||
      !j.contains("sentences") || !j["sentences"].is_array()) {
    throw ValidationError(src + ": expected {\"doc_id\": str, \"sentences\": [...]}");
  }
  Document doc;
  doc.doc_id = j["doc_id"].get<std::string>();
  int si = 0;
  for (const auto &js : j["sentences"]) {
    std::string sentence_where = src + ": sentence " + std::to_string(si) + ": ";
    if (!js.is_array()) throw ValidationError(sentence_where + "sentence must be an array");
    Sentence s;
    s.index = si;
    int wi = 0;
    for (const auto &jw : js) {
      std::string where = sentence_where + "word " + std::to_string(wi) + ": ";
      if (!jw.is_object()) throw ValidationError(where + "word must be an object");
      WordItem w;
      if (!jw.contains("w") || !jw["w"].is_string())
        throw ValidationError(where + "field 'w' must be a string");
      if (!jw.contains("pos") || !jw["pos"].is_string())
        throw ValidationError(where + "field 'pos' must be a string");
      if (!jw.contains("role") || !jw["role"].is_string())
        throw ValidationError(where + "field 'role' must be a string");
      w.surface = jw["w"].get<std::string>();
      w.pos = jw["pos"].get<std::string>();
      try {
        w.role = ParseRole(jw["role"].get<std::string>());
      } catch (const ValidationError &e) {
        throw ValidationError(where + e.what());
      }
      w.antecedent_id = OptionalString(jw, "ant_id", where);
      w.refers_to = OptionalString(jw, "ref", where);
      if (!jw.contains("span")) throw ValidationError(where + "missing field 'span'");
      const auto &span = jw["span"];
      if (!span.is_null()) {
        if (!span.is_array() || span.size() != 2 || !span[0].is_number_integer() ||
            !span[1].is_number_integer())
          throw ValidationError(where + "field 'span' must be [int, int] or null");
        w.anaphor_span = CharSpan{span[0].get<int>(), span[1].get<int>()};
      }
      s.words.push_back(std::move(w));
      ++wi;
    }
    doc.sentences.push_back(std::move(s));
    ++si;
  }
  ValidateDocument(doc, src, strict);
  return doc;
}

void SaveDocument(const Document &doc, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << SerializeDocument(doc);
  if (!out) throw IoError("write failed for " + path.string());
}

Document LoadDocument(const std::filesystem::path &path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseDocumentJson(buffer.str(), path.string(), strict);
}

std::vector<Document> LoadCorpus(const std::filesystem::path &dir, bool strict) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        entry.path().filename().string().front() != '_')
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto &f : files) docs.push_back(LoadDocument(f, strict));
  return docs;
}

std::string CleaningStatsJson(const CleaningStats &stats) {
  ordered_json j;
  j["dangling"] = stats.dangling;
  j["chains_collapsed"] = stats.chains_collapsed;
  j["non_pronominal_dropped"] = stats.non_pronominal_dropped;
  j["kept"] = stats.kept;
  return j.dump();
}

DocumentSplit SplitDocuments(const std::vector<Document> &docs, double ratio,
                             uint64_t seed) {
  if (docs.empty()) throw UsageError("cannot split an empty corpus");
  if (!(ratio > 0.0 && ratio < 1.0)) throw UsageError("split ratio must be in (0, 1)");
  const size_t n = docs.size();
  const size_t n_train = static_cast<size_t>(std::llround(ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n)
    throw UsageError("split ratio " + std::to_string(ratio) + " leaves one side empty for " +
                     std::to_string(n) + " documents");
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(order);
  std::vector<bool> in_train(n, false);
  for (size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;
  DocumentSplit split;
  for (size_t i = 0; i < n; ++i) (in_train[i] ? split.train : split.test).push_back(docs[i]);
  return split;
}

}  // namespace pronres
