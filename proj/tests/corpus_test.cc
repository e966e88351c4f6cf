// Copyright 2026 The Nestrec Authors.
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

#include "nestrec/corpus.h"

#include <gtest/gtest.h>

#include <random>

#include "testing/fixtures.h"

namespace nestrec {
namespace {

using testing::ArmyOfDiocletian;
using testing::MakeSentence;
using testing::MakeSpan;
using testing::TokenSpec;

constexpr char kThreeTokens[] =
    "# newdoc id = mark:1\n"
    "# sent_id = mark_1-1\n"
    "# text = a b c\n"
    "1\ta\ta\tDET\tART\t_\t2\tdet\t_\t_\n"
    "2\tb\tb\tNOUN\tN\tGender=Masc\t0\troot\t_\tSpaceAfter=No|Entity=(person-1)\n"
    "3\tc\tc\tPUNCT\tPUNCT\t_\t2\tpunct\t_\t_\n"
    "\n";

TEST(ParseConlluTest, MinimalSentence) {
  Corpus corpus = ParseConllu(kThreeTokens, {.corpus_id = "fallback"});
  ASSERT_EQ(corpus.documents.size(), 1u);
  const Document &doc = corpus.documents[0];
  EXPECT_EQ(doc.doc_id, "mark:1");
  EXPECT_EQ(doc.corpus_id, "mark");
  ASSERT_EQ(doc.sentences.size(), 1u);
  const Sentence &s = doc.sentences[0];
  EXPECT_EQ(s.sent_id, "mark_1-1");
  EXPECT_EQ(s.size(), 3);
  ASSERT_EQ(s.entities.size(), 1u);
  EXPECT_EQ(s.entities[0].etype, EntityType::kPerson);
  EXPECT_EQ(s.entities[0].head, 2);
  EXPECT_EQ(SerializeConllu(corpus), kThreeTokens);
}

TEST(ParseConlluTest, NineColumnsIsAParseErrorNamingTheLine) {
  std::string text =
      "# sent_id = x\n"
      "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\n"
      "\n";
  try {
    ParseConllu(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseConlluTest, HeadOutOfRangeAndCyclesAreValidationErrors) {
  EXPECT_THROW(ParseConllu("1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
                           "2\tb\tb\tNOUN\t_\t_\t7\tdep\t_\t_\n\n"),
               ValidationError);
  EXPECT_THROW(ParseConllu("1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
                           "2\tb\tb\tNOUN\t_\t_\t3\tdep\t_\t_\n"
                           "3\tc\tc\tNOUN\t_\t_\t2\tdep\t_\t_\n\n"),
               ValidationError);
  EXPECT_THROW(ParseConllu("1\ta\ta\tNOUN\t_\t_\t1\troot\t_\t_\n\n"),
               ValidationError);
}

TEST(ParseConlluTest, MultiwordRangesAndEmptyNodesRoundTrip) {
  std::string text =
      "# sent_id = mw\n"
      "1-2\tab\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\ta\ta\tADP\t_\t_\t2\tcase\t_\t_\n"
      "2\tb\tb\tNOUN\t_\t_\t0\troot\t_\tEntity=(place-4-Alexandria)|Gloss=x\n"
      "2.1\tz\tz\t_\t_\t_\t_\t_\t2:dep\t_\n"
      "\n"
      "# sent_id = second\n"
      "1\tq\tq\tVERB\t_\t_\t0\troot\t_\tNoValueFlag\n"
      "\n";
  Corpus corpus = ParseConllu(text);
  const Sentence &s = corpus.documents[0].sentences[0];
  ASSERT_EQ(s.tokens[0].opaque_lines.size(), 1u);
  EXPECT_EQ(s.trailing_lines.size(), 1u);
  ASSERT_EQ(s.entities.size(), 1u);
  EXPECT_EQ(s.entities[0].identity.value_or(""), "Alexandria");
  EXPECT_EQ(SerializeConllu(corpus), text);
}

TEST(DecodeEntitiesTest, SingleBracketPair) {
  Sentence s = MakeSentence({{"a", "NOUN", 0}, {"b", "NOUN", 1},
                             {"c", "NOUN", 1}});
  s.token(1).misc.Set("Entity", "(person-1");
  s.token(3).misc.Set("Entity", "1)");
  std::vector<EntitySpan> spans = DecodeEntities(s);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].start, 1);
  EXPECT_EQ(spans[0].end, 3);
  EXPECT_EQ(spans[0].etype, EntityType::kPerson);
  EXPECT_EQ(spans[0].head, 1);
}

TEST(DecodeEntitiesTest, LaPoliceChiefNesting) {
  // [[[LA] police] chief]
  Sentence s = MakeSentence({{"LA", "PROPN", 2, "compound"},
                             {"police", "NOUN", 3, "compound"},
                             {"chief", "NOUN", 0, "root"}});
  s.token(1).misc.Set("Entity", "(person-1(organization-2(place-3)");
  s.token(2).misc.Set("Entity", "2)");
  s.token(3).misc.Set("Entity", "1)");
  std::vector<EntitySpan> spans = DecodeEntities(s);
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0].etype, EntityType::kPerson);
  EXPECT_EQ(spans[1].etype, EntityType::kOrganization);
  EXPECT_EQ(spans[2].etype, EntityType::kPlace);
  EXPECT_TRUE(spans[0].Contains(spans[1]));
  EXPECT_TRUE(spans[1].Contains(spans[2]));
  EXPECT_EQ(spans[0].head, 3);
  EXPECT_EQ(spans[1].head, 2);
  EXPECT_EQ(spans[2].head, 1);
}

TEST(DecodeEntitiesTest, Errors) {
  Sentence s = MakeSentence({{"a", "NOUN", 0}, {"b", "NOUN", 1},
                             {"c", "NOUN", 1}});
  Sentence unmatched = s;
  unmatched.token(1).misc.Set("Entity", "(person-2");
  EXPECT_THROW(DecodeEntities(unmatched), DecodeError);

  Sentence stray_close = s;
  stray_close.token(2).misc.Set("Entity", "5)");
  EXPECT_THROW(DecodeEntities(stray_close), DecodeError);

  Sentence unknown = s;
  unknown.token(1).misc.Set("Entity", "(deity-1)");
  EXPECT_THROW(DecodeEntities(unknown), DecodeError);

  Sentence crossing = s;
  // person [1,2] and place [2,3]
  crossing.token(1).misc.Set("Entity", "(person-1");
  crossing.token(2).misc.Set("Entity", "1)(place-2");
  crossing.token(3).misc.Set("Entity", "2)");
  EXPECT_THROW(DecodeEntities(crossing), NestingError);
}

TEST(EncodeEntitiesTest, EmptyAndSingleton) {
  std::vector<std::string> none = EncodeEntities({}, 3);
  for (const std::string &v : none) EXPECT_TRUE(v.empty());

  Sentence s = MakeSentence({{"a", "NOUN", 0}, {"b", "NOUN", 1},
                             {"c", "NOUN", 1}});
  std::vector<EntitySpan> spans = {MakeSpan(s, 2, 2, EntityType::kTime, 7)};
  std::vector<std::string> values = EncodeEntities(spans, 3);
  EXPECT_EQ(values[0], "");
  EXPECT_EQ(values[1], "(time-7)");
  EXPECT_EQ(values[2], "");
}

TEST(EncodeEntitiesTest, MarkerOrder) {
  Sentence s = MakeSentence({{"LA", "PROPN", 2}, {"police", "NOUN", 3},
                             {"chief", "NOUN", 0}});
  std::vector<EntitySpan> spans = {
      MakeSpan(s, 1, 1, EntityType::kPlace, 3),
      MakeSpan(s, 1, 3, EntityType::kPerson, 1),
      MakeSpan(s, 1, 2, EntityType::kOrganization, 2)};
  std::vector<std::string> values = EncodeEntities(spans, 3);
  EXPECT_EQ(values[0], "(person-1(organization-2(place-3)");
  EXPECT_EQ(values[1], "2)");
  EXPECT_EQ(values[2], "1)");
}

TEST(EncodeEntitiesTest, CrossingSpansRejected) {
  Sentence s = MakeSentence({{"a", "NOUN", 0}, {"b", "NOUN", 1},
                             {"c", "NOUN", 1}});
  std::vector<EntitySpan> spans = {MakeSpan(s, 1, 2, EntityType::kTime, 1),
                                   MakeSpan(s, 2, 3, EntityType::kTime, 2)};
  EXPECT_THROW(EncodeEntities(spans, 3), NestingError);
}

// Random nested annotations survive encode -> decode unchanged.
TEST(EncodeEntitiesTest, RandomRoundTrip) {
  std::mt19937 rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 12)(rng);
    Sentence s = testing::RandomSentence(testing::RandomTree(n, rng), rng);
    std::vector<EntitySpan> spans = testing::RandomNestedSpans(n, rng);
    for (EntitySpan &span : spans) {
      span.head = SpanHead(s, span.start, span.end);
    }
    std::vector<std::string> values = EncodeEntities(spans, n);
    for (int t = 1; t <= n; ++t) {
      if (!values[t - 1].empty()) s.token(t).misc.Set("Entity", values[t - 1]);
    }
    std::vector<EntitySpan> decoded = DecodeEntities(s);
    SortSpans(spans);
    ASSERT_EQ(decoded, spans) << "trial " << trial;
  }
}

TEST(EscapeIdentityTest, ReservedCharactersSurvive) {
  for (std::string id : {"Kingdom_of_Israel_(united_monarchy)", "100%",
                         "a|b", "Jean-Paul"}) {
    std::string escaped = EscapeIdentity(id);
    EXPECT_EQ(escaped.find_first_of("()|"), std::string::npos);
    EXPECT_EQ(UnescapeIdentity(escaped), id);
  }
  EXPECT_EQ(EscapeIdentity("John the Baptist"), "John_the_Baptist");
}

TEST(SpanHeadTest, Examples) {
  Sentence s = ArmyOfDiocletian();
  EXPECT_EQ(SpanHead(s, 5, 5), 5);
  EXPECT_EQ(SpanHead(s, 2, 5), 3);  // the army of Diocletian -> army
  EXPECT_EQ(SpanHead(s, 4, 5), 5);
  EXPECT_THROW(SpanHead(s, 3, 2), std::invalid_argument);

  Sentence punct = MakeSentence({{",", "PUNCT", 2}, {".", "PUNCT", 0}});
  EXPECT_EQ(SpanHead(punct, 1, 2), 1);
  Sentence edge = MakeSentence({{"(", "PUNCT", 0}, {"x", "NOUN", 1},
                                {"y", "NOUN", 2}});
  // No content token has an outside head; fall back to leftmost content.
  EXPECT_EQ(SpanHead(edge, 2, 3), 2);
  EXPECT_EQ(SpanHead(edge, 1, 3), 2);
}

// Brute-force restatement of the head rule, scanned independently.
int BruteForceHead(const Sentence &s, int start, int end) {
  std::vector<int> content, external;
  for (int i = start; i <= end; ++i) {
    if (s.token(i).upos == "PUNCT") continue;
    content.push_back(i);
    int h = s.token(i).head;
    bool inside = false;
    for (int j = start; j <= end; ++j) inside = inside || (h == j);
    if (!inside) external.push_back(i);
  }
  if (!external.empty()) return external.front();
  if (!content.empty()) return content.front();
  return start;
}

TEST(SpanHeadTest, MatchesBruteForceOnRandomTrees) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 9)(rng);
    Sentence s = testing::RandomSentence(testing::RandomTree(n, rng), rng);
    for (int a = 1; a <= n; ++a) {
      for (int b = a; b <= n; ++b) {
        ASSERT_EQ(SpanHead(s, a, b), BruteForceHead(s, a, b));
        ASSERT_EQ(SpanHead(s, a, b), SpanHead(s, a, b));
      }
    }
  }
}

TEST(ValidateCorpusTest, WellFormedCorpusHasNoViolations) {
  Corpus corpus = ParseConllu(kThreeTokens);
  EXPECT_TRUE(ValidateCorpus(corpus).empty());
}

TEST(ValidateCorpusTest, CrossingSpansGiveOneViolation) {
  Sentence s = MakeSentence({{"a", "NOUN", 0}, {"b", "NOUN", 1},
                             {"c", "NOUN", 1}, {"d", "NOUN", 1},
                             {"e", "NOUN", 1}});
  s.entities = {MakeSpan(s, 1, 3, EntityType::kPerson, 1),
                MakeSpan(s, 2, 5, EntityType::kPlace, 2)};
  std::vector<Violation> v = ValidateCorpus(testing::SingleDocCorpus({s}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "crossing");
  EXPECT_EQ(v[0].doc_id, "doc1");
  EXPECT_EQ(v[0].sent_id, "s1");
}

TEST(ValidateCorpusTest, HeadOutsideSpanGivesOneViolation) {
  Sentence s = ArmyOfDiocletian();
  EntitySpan span = MakeSpan(s, 2, 3, EntityType::kOrganization, 1);
  span.head = 5;
  s.entities = {span};
  std::vector<Violation> v = ValidateCorpus(testing::SingleDocCorpus({s}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "span_head");
}

TEST(ValidateCorpusTest, IdentityOnUnnamedSpanAndDuplicateIds) {
  Sentence s = ArmyOfDiocletian();
  EntitySpan org = MakeSpan(s, 2, 5, EntityType::kOrganization, 1);
  org.identity = "Roman_army";
  EntitySpan per = MakeSpan(s, 5, 5, EntityType::kPerson, 1);
  per.identity = "Diocletian";
  s.entities = {org, per};
  std::vector<Violation> v = ValidateCorpus(testing::SingleDocCorpus({s}));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].rule, "identity_unnamed");
  EXPECT_EQ(v[1].rule, "entity_id");
}

// Every constructed partially-overlapping pair is rejected.
TEST(ValidateCorpusTest, RejectsEveryCrossingPair) {
  const int n = 7;
  std::vector<TokenSpec> specs;
  for (int i = 1; i <= n; ++i) specs.push_back({"w", "NOUN", i == 1 ? 0 : 1});
  Sentence base = MakeSentence(specs);
  int checked = 0;
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b)
      for (int c = 1; c <= n; ++c)
        for (int d = c; d <= n; ++d) {
          if (!Crosses(a, b, c, d)) continue;
          Sentence s = base;
          s.entities = {MakeSpan(s, a, b, EntityType::kTime, 1),
                        MakeSpan(s, c, d, EntityType::kTime, 2)};
          std::vector<Violation> v =
              ValidateCorpus(testing::SingleDocCorpus({s}));
          ASSERT_EQ(v.size(), 1u);
          ASSERT_EQ(v[0].rule, "crossing");
          ++checked;
        }
  EXPECT_GT(checked, 100);
}

TEST(TreeTest, AnalyzeTree) {
  TreeInfo info = AnalyzeTree(ArmyOfDiocletian());
  EXPECT_EQ(info.subtree_size[3], 5);
  EXPECT_EQ(info.subtree_size[5], 2);
  EXPECT_EQ(info.leftmost[5], 4);
  EXPECT_EQ(info.rightmost[3], 5);
  EXPECT_EQ(info.depth[4], 2);
}

TEST(OverlayTreesTest, CopiesTreeColumnsAndRecomputesHeads) {
  Corpus gold = testing::SingleDocCorpus({ArmyOfDiocletian()});
  gold.documents[0].sentences[0].entities = {
      MakeSpan(gold.documents[0].sentences[0], 2, 5,
               EntityType::kOrganization, 1)};
  Corpus predicted = gold;
  Sentence &ps = predicted.documents[0].sentences[0];
  // Parser attaches everything to "for".
  for (int t = 2; t <= 5; ++t) ps.token(t).head = 1;
  ps.token(1).head = 0;
  OverlayTrees(gold, predicted);
  EXPECT_EQ(gold.documents[0].sentences[0].token(3).head, 1);
  EXPECT_EQ(gold.documents[0].sentences[0].entities[0].head, 2);
}

}  // namespace
}  // namespace nestrec
