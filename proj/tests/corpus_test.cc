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

#include <gtest/gtest.h>

#include <set>

#include "json.hpp"
#include "pronres/error.h"
#include "test_util.h"

namespace pronres {
namespace {

using testing::Ana;
using testing::Ant;
using testing::DataDir;
using testing::Doc;
using testing::TempDir;
using testing::W;

Document School() { return ConvertXmlFile(DataDir() / "xml" / "school.xml"); }

TEST(ConvertXmlTest, SchoolStructure) {
  Document d = School();
  EXPECT_EQ(d.doc_id, "school");
  ASSERT_EQ(d.sentences.size(), 3u);
  EXPECT_EQ(d.sentences[0].words.size(), 4u);
  EXPECT_EQ(d.sentences[1].words.size(), 4u);
  EXPECT_EQ(d.sentences[2].words.size(), 5u);

  const WordItem &ahmad = d.sentences[0].words[0];
  EXPECT_EQ(ahmad.surface, "أحمد");
  EXPECT_EQ(ahmad.role, Role::kAntecedent);
  EXPECT_EQ(ahmad.antecedent_id, "1");

  const WordItem &attached = d.sentences[1].words[0];
  EXPECT_EQ(attached.surface, "قابله");
  EXPECT_EQ(attached.role, Role::kAnaphor);
  EXPECT_EQ(attached.refers_to, "1");
  ASSERT_TRUE(attached.anaphor_span.has_value());
  EXPECT_EQ(*attached.anaphor_span, (CharSpan{4, 5}));

  const WordItem &student = d.sentences[1].words[1];
  EXPECT_EQ(student.role, Role::kBoth);
  EXPECT_EQ(student.antecedent_id, "3");
  EXPECT_EQ(student.refers_to, "1");
  EXPECT_FALSE(student.anaphor_span.has_value());

  EXPECT_EQ(d.sentences[2].words[0].refers_to, "3");
  EXPECT_EQ(d.sentences[2].words[3].refers_to, "9");
}

TEST(ConvertXmlTest, OneAnaphorOneAntecedent) {
  Document d = ConvertXml(
      "<document id='x'><s><EXP id='7'><w pos='NOUN'>الكتاب</w></EXP>"
      "<PTR ref='7'><w pos='PRON'>هو</w></PTR></s></document>");
  int refs = 0, ids = 0;
  for (const Sentence &s : d.sentences) {
    for (const WordItem &w : s.words) {
      refs += w.refers_to.has_value();
      ids += w.antecedent_id.has_value();
    }
  }
  EXPECT_EQ(refs, 1);
  EXPECT_EQ(ids, 1);
  EXPECT_EQ(d.sentences[0].words[1].refers_to, d.sentences[0].words[0].antecedent_id);
}

TEST(ConvertXmlTest, NoAnnotationsAllOrdinary) {
  Document d = ConvertXmlFile(DataDir() / "xml" / "plain.xml");
  for (const WordItem &w : d.sentences[0].words) EXPECT_EQ(w.role, Role::kOrdinary);
}

TEST(ConvertXmlTest, MalformedNamesLine) {
  try {
    ConvertXmlFile(DataDir() / "malformed.xml");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("malformed.xml:5"), std::string::npos) << e.what();
  }
}

TEST(ConvertXmlTest, UnknownTagListed) {
  try {
    ConvertXml("<document><s><b>x</b></s></document>");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError &e) {
    EXPECT_NE(std::string(e.what()).find("<b>"), std::string::npos) << e.what();
  }
}

TEST(CorpusJsonTest, FieldOrderAndNulls) {
  Document d = Doc("d", {{Ant("أحمد", "NOUN", "1"), Ana("قابله", "VERB+PRON", "1", CharSpan{4, 5})}});
  auto j = nlohmann::ordered_json::parse(SerializeDocument(d));
  std::vector<std::string> top;
  for (const auto &[k, v] : j.items()) top.push_back(k);
  EXPECT_EQ(top, (std::vector<std::string>{"doc_id", "sentences"}));
  const auto &words = j["sentences"][0];
  ASSERT_EQ(words.size(), 2u);
  for (const auto &w : words) {
    std::vector<std::string> keys;
    for (const auto &[k, v] : w.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"w", "pos", "role", "ant_id", "ref", "span"}));
  }
  EXPECT_EQ(words[0]["role"], "antecedent");
  EXPECT_TRUE(words[0]["ref"].is_null());
  EXPECT_TRUE(words[0]["span"].is_null());
  EXPECT_TRUE(words[1]["ant_id"].is_null());
  EXPECT_EQ(words[1]["span"], nlohmann::json::parse("[4,5]"));
}

TEST(CorpusJsonTest, RoundTripByteIdentical) {
  TempDir tmp;
  Document d = School();
  SaveDocument(d, tmp / "school.json");
  std::vector<Document> loaded = LoadCorpus(tmp.path(), /*strict=*/false);
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0], d);
  EXPECT_EQ(SerializeDocument(loaded[0]), SerializeDocument(d));
  EXPECT_EQ(testing::ReadFile(tmp / "school.json"), SerializeDocument(loaded[0]));
}

TEST(CorpusJsonTest, StrictRejectsDanglingRef) {
  Document d = Doc("d", {{W("كتاب", "NOUN"), Ana("هو", "PRON", "42")}});
  std::string json = SerializeDocument(d);
  EXPECT_NO_THROW(ParseDocumentJson(json, "d.json", /*strict=*/false));
  try {
    ParseDocumentJson(json, "d.json", /*strict=*/true);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError &e) {
    std::string m = e.what();
    EXPECT_NE(m.find("d.json"), std::string::npos) << m;
    EXPECT_NE(m.find("sentence 0"), std::string::npos) << m;
  }
}

TEST(CorpusJsonTest, RoleFieldConsistency) {
  std::string bad =
      R"({"doc_id":"d","sentences":[[{"w":"هو","pos":"PRON","role":"anaphor",)"
      R"("ant_id":null,"ref":null,"span":null}]]})";
  EXPECT_THROW(ParseDocumentJson(bad, "x", false), ValidationError);
  EXPECT_THROW(ParseDocumentJson("{not json", "x", false), ParseError);
}

TEST(CorpusJsonTest, EmptyDirectoryGivesEmptyCorpus) {
  TempDir tmp;
  EXPECT_TRUE(LoadCorpus(tmp.path()).empty());
}

TEST(CorpusJsonTest, MetadataFilesSkipped) {
  TempDir tmp;
  SaveDocument(Doc("a", {{W("كتاب", "NOUN")}}), tmp / "a.json");
  testing::WriteFile(tmp / "_cleaning_stats.json", "{}");
  EXPECT_EQ(LoadCorpus(tmp.path()).size(), 1u);
}

TEST(CleanTest, SchoolCounts) {
  auto [clean, stats] = CleanDocument(School());
  EXPECT_EQ(stats.dangling, 1);
  EXPECT_EQ(stats.chains_collapsed, 1);
  EXPECT_EQ(stats.non_pronominal_dropped, 1);
  EXPECT_EQ(stats.kept, 2);
  EXPECT_EQ(CleaningStatsJson(stats),
            R"({"dangling":1,"chains_collapsed":1,"non_pronominal_dropped":1,"kept":2})");
  // The noun anaphor loses its link but stays an antecedent.
  EXPECT_EQ(clean.sentences[1].words[1].role, Role::kAntecedent);
  EXPECT_FALSE(clean.sentences[2].words[3].refers_to.has_value());
  EXPECT_EQ(clean.sentences[2].words[3].role, Role::kOrdinary);
  EXPECT_NO_THROW(ValidateDocument(clean, "clean", /*strict=*/true));
}

TEST(CleanTest, DanglingReferenceDropped) {
  Document d = Doc("d", {{W("كتاب", "NOUN"), Ana("هو", "PRON", "42")}});
  auto [clean, stats] = CleanDocument(d);
  EXPECT_EQ(stats.dangling, 1);
  EXPECT_EQ(stats.kept, 0);
  EXPECT_TRUE(Relations(clean).empty());
}

TEST(CleanTest, ChainCollapsesToNearestNoun) {
  // A <- B <- C with A and B nouns and C a pronoun.
  WordItem b = Ant("الرجل", "NOUN", "B");
  b.role = Role::kBoth;
  b.refers_to = "A";
  Document d = Doc("d", {{Ant("أحمد", "NOUN_PROP", "A"), W("كان", "VERB")},
                         {b, W("طويل", "ADJ")},
                         {Ana("هو", "PRON", "B")}});
  auto [clean, stats] = CleanDocument(d);
  EXPECT_EQ(clean.sentences[2].words[0].refers_to, "B");
  EXPECT_EQ(stats.chains_collapsed, 1);
  EXPECT_EQ(stats.non_pronominal_dropped, 1);
}

TEST(CleanTest, ChainWalksPastPronounMention) {
  // C -> B -> A where B is itself a pronoun: the nearest nominal is A.
  WordItem b = Ant("هو", "PRON", "B");
  b.role = Role::kBoth;
  b.refers_to = "A";
  Document d = Doc("d", {{Ant("أحمد", "NOUN_PROP", "A"), b}, {Ana("قابله", "VERB+PRON", "B", CharSpan{4, 5})}});
  auto [clean, stats] = CleanDocument(d);
  EXPECT_EQ(clean.sentences[1].words[0].refers_to, "A");
  EXPECT_EQ(clean.sentences[0].words[1].refers_to, "A");
  EXPECT_EQ(stats.kept, 2);
}

TEST(CleanTest, OnlyPronominalSurvives) {
  Document d = Doc("d", {{Ant("أحمد", "NOUN_PROP", "1"), Ana("ذهب", "VERB", "1"),
                          Ana("هو", "PRON", "1")}});
  auto [clean, stats] = CleanDocument(d);
  std::vector<RelationRecord> rel = Relations(clean);
  ASSERT_EQ(rel.size(), 1u);
  EXPECT_EQ(rel[0].anaphor, (WordLocation{0, 2}));
  EXPECT_EQ(stats.non_pronominal_dropped, 1);
}

TEST(CleanTest, IdempotentAndGoldPrecedes) {
  for (const Document &d : {School(), ConvertXmlFile(DataDir() / "xml" / "plain.xml")}) {
    Document once = CleanDocument(d).first;
    auto [twice, stats] = CleanDocument(once);
    EXPECT_EQ(twice, once);
    EXPECT_EQ(stats.dangling + stats.non_pronominal_dropped, 0);
    for (const RelationRecord &r : Relations(once)) EXPECT_LT(r.antecedent, r.anaphor);
  }
}

std::vector<Document> NumberedDocs(int n) {
  std::vector<Document> docs;
  for (int i = 0; i < n; ++i) docs.push_back(Doc("doc" + std::to_string(i), {{W("كتاب", "NOUN")}}));
  return docs;
}

std::set<std::string> Ids(const std::vector<Document> &docs) {
  std::set<std::string> ids;
  for (const Document &d : docs) ids.insert(d.doc_id);
  return ids;
}

TEST(SplitTest, FiftyNineDocuments) {
  std::vector<Document> docs = NumberedDocs(59);
  DocumentSplit s = SplitDocuments(docs, 0.7, 1);
  EXPECT_EQ(s.train.size(), 41u);
  EXPECT_EQ(s.test.size(), 18u);
  std::set<std::string> train = Ids(s.train), test = Ids(s.test), all = train;
  all.insert(test.begin(), test.end());
  EXPECT_EQ(all.size(), 59u);
  for (const std::string &id : train) EXPECT_FALSE(test.count(id));
}

TEST(SplitTest, Deterministic) {
  std::vector<Document> docs = NumberedDocs(10);
  DocumentSplit a = SplitDocuments(docs, 0.7, 5), b = SplitDocuments(docs, 0.7, 5);
  EXPECT_EQ(Ids(a.train), Ids(b.train));
  EXPECT_EQ(a.train.size(), 7u);
  DocumentSplit c = SplitDocuments(docs, 0.7, 6);
  EXPECT_EQ(c.train.size(), 7u);
}

TEST(SplitTest, TwoDocumentsHalf) {
  DocumentSplit s = SplitDocuments(NumberedDocs(2), 0.5, 3);
  ASSERT_EQ(s.train.size(), 1u);
  ASSERT_EQ(s.test.size(), 1u);
  EXPECT_NE(s.train[0].doc_id, s.test[0].doc_id);
}

TEST(SplitTest, EmptySideRejected) {
  EXPECT_THROW(SplitDocuments(NumberedDocs(2), 0.1, 1), UsageError);
  EXPECT_THROW(SplitDocuments({}, 0.7, 1), UsageError);
  EXPECT_THROW(SplitDocuments(NumberedDocs(5), 1.0, 1), UsageError);
}

}  // namespace
}  // namespace pronres
