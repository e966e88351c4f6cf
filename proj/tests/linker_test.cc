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

#include "nestrec/linker.h"

#include <gtest/gtest.h>

#include <random>

#include "testing/fixtures.h"

namespace nestrec {
namespace {

using testing::MakeSentence;
using testing::MakeSpan;

LinkMention Mention(const std::string &corpus, const std::string &text,
                    const std::string &head, const std::string &doc = "d",
                    int start = 1) {
  LinkMention m;
  m.locator = {doc, "s1", start, start};
  m.corpus_id = corpus;
  m.text = text;
  m.head_lemma = head;
  return m;
}

TEST(LinkTableTest, OneMentionFillsAllLevels) {
  LinkTable table;
  EXPECT_TRUE(table.empty());
  LinkMention m = Mention("mark", "John who baptizes", "John");
  table.Add(m, "John_the_Baptist");
  for (int level = 1; level <= 4; ++level) {
    const LinkTable::Counts *c = table.Find(level, LinkTable::KeyFor(level, m));
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->at("John_the_Baptist"), 1);
  }
  EXPECT_TRUE(BuildLinkTable({}).empty());
}

TEST(LinkTableTest, BuildFromCorpus) {
  Sentence s = MakeSentence({{"Apa", "NOUN", 2, "dep", "apa"},
                             {"Shenoute", "PROPN", 0, "root"},
                             {"came", "VERB", 2}});
  s.entities = {MakeSpan(s, 1, 2, EntityType::kPerson, 1),
                MakeSpan(s, 2, 2, EntityType::kPerson, 2)};
  s.entities[0].identity = "Shenoute";
  std::vector<Corpus> corpora = {testing::SingleDocCorpus({s}, "shenoute:1",
                                                          "shenoute")};
  LinkTable table = BuildLinkTable(corpora);
  EXPECT_EQ(table.Find(2, "Apa Shenoute")->at("Shenoute"), 1);
  EXPECT_EQ(table.Find(4, "Shenoute")->at("Shenoute"), 1);
  // The unlinked inner span contributes nothing.
  EXPECT_EQ(table.Find(2, "Shenoute"), nullptr);

  std::vector<LinkMention> all = CollectLinkMentions(corpora[0], false);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(CollectLinkMentions(corpora[0], true).size(), 1u);
  EXPECT_EQ(all[0].text, "Apa Shenoute");
  EXPECT_EQ(all[0].corpus_id, "shenoute");
}

TEST(LinkTableTest, TsvRoundTrip) {
  LinkTable table;
  table.Add(Mention("mark", "John", "John"), "John_the_Baptist", 3);
  table.Add(Mention("acts", "Peter", "Peter"), "Saint_Peter");
  std::string tsv = table.Serialize();
  EXPECT_NE(tsv.find("ct\tmark\x1fJohn\tJohn_the_Baptist\t3\n"),
            std::string::npos);
  LinkTable reloaded = LinkTable::Parse(tsv);
  EXPECT_EQ(reloaded.Serialize(), tsv);
  EXPECT_EQ(reloaded, table);
  EXPECT_THROW(LinkTable::Parse("zz\tk\ta\t1\n"), ParseError);
  EXPECT_THROW(LinkTable::Parse("t\tk\ta\t0\n"), ParseError);
  EXPECT_THROW(LinkTable::Parse("t\tk\ta\n"), ParseError);
}

TEST(LinkCascadeTest, LevelsAndTies) {
  LinkTable table;
  LinkMention known = Mention("mark", "John who baptizes", "John");
  table.Add(known, "A", 3);
  table.Add(known, "B", 1);
  auto s = LinkCascade(known, table);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(*s, (LinkSuggestion{"A", 1, 3}));

  // Same text in another corpus falls to level 2.
  EXPECT_EQ(LinkCascade(Mention("acts", "John who baptizes", "John"), table)
                ->rule_level,
            2);

  // Unknown text, head known in-corpus.
  LinkTable heads;
  heads.Add(Mention("mark", "John", "John"), "John_the_Baptist", 5);
  heads.Add(Mention("mark", "John son of Zebedee", "John"), "John_the_Apostle",
            2);
  heads.Add(Mention("acts", "John", "John"), "John_the_Apostle", 9);
  auto in_corpus = LinkCascade(Mention("mark", "holy John", "John"), heads);
  EXPECT_EQ(*in_corpus, (LinkSuggestion{"John_the_Baptist", 3, 5}));
  auto anywhere = LinkCascade(Mention("luke", "holy John", "John"), heads);
  EXPECT_EQ(*anywhere, (LinkSuggestion{"John_the_Apostle", 4, 11}));

  EXPECT_FALSE(LinkCascade(Mention("mark", "Zzz", "Zzz"), heads).has_value());

  LinkTable tie;
  tie.Add(Mention("c", "X", "X"), "beta");
  tie.Add(Mention("c", "X", "X"), "alpha");
  EXPECT_EQ(LinkCascade(Mention("c", "X", "X"), tie)->article, "alpha");
}

TEST(LinkCascadeTest, Baselines) {
  LinkTable table;
  table.Add(Mention("mark", "John", "John"), "A", 2);
  table.Add(Mention("mark", "John the elder", "John"), "B", 3);
  EXPECT_EQ(LinkExactBaseline(Mention("x", "John", "John"), table), "A");
  EXPECT_FALSE(LinkExactBaseline(Mention("x", "Jn", "John"), table));
  EXPECT_EQ(LinkHeadBaseline(Mention("x", "Jn", "John"), table), "B");
  EXPECT_FALSE(LinkHeadBaseline(Mention("x", "Jn", "Jn"), table));
}

TEST(EvaluateLinkingTest, Definitions) {
  std::vector<LinkMention> gold = {Mention("c", "a", "a"),
                                   Mention("c", "b", "b")};
  gold[0].identity = "A";
  gold[1].identity = "B";
  std::vector<std::optional<std::string>> right = {"A", "B"};
  LinkScores all = EvaluateLinking(gold, right);
  EXPECT_EQ(all.accuracy, 1.0);
  EXPECT_EQ(all.coverage, 1.0);
  EXPECT_EQ(all.no_err, 1.0);
  std::vector<std::optional<std::string>> none = {std::nullopt, std::nullopt};
  LinkScores abstain = EvaluateLinking(gold, none);
  EXPECT_EQ(abstain.accuracy, 0.0);
  EXPECT_EQ(abstain.coverage, 0.0);
  EXPECT_EQ(abstain.no_err, 1.0);
  std::vector<std::optional<std::string>> mixed = {"wrong", std::nullopt};
  LinkScores m = EvaluateLinking(gold, mixed);
  EXPECT_EQ(m.no_err, 0.5);
  EXPECT_THROW(EvaluateLinking({}, {}), ValidationError);
}

TEST(EvaluateLinkingTest, CascadeCoverageDominatesBaselines) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    LinkTable table;
    for (int i = 0; i < 20; ++i) {
      table.Add(Mention("c" + std::to_string(pick(rng) % 2),
                        "t" + std::to_string(pick(rng)),
                        "h" + std::to_string(pick(rng))),
                "art" + std::to_string(pick(rng)));
    }
    std::vector<LinkMention> gold;
    std::vector<std::optional<std::string>> cas, exact, head;
    for (int i = 0; i < 30; ++i) {
      LinkMention m = Mention("c" + std::to_string(pick(rng) % 3),
                              "t" + std::to_string(pick(rng) + 3),
                              "h" + std::to_string(pick(rng) + 3));
      m.identity = "art" + std::to_string(pick(rng));
      auto s = LinkCascade(m, table);
      cas.push_back(s ? std::optional(s->article) : std::nullopt);
      exact.push_back(LinkExactBaseline(m, table));
      head.push_back(LinkHeadBaseline(m, table));
      gold.push_back(m);
    }
    LinkScores c = EvaluateLinking(gold, cas);
    ASSERT_GE(c.coverage, EvaluateLinking(gold, exact).coverage);
    ASSERT_GE(c.coverage, EvaluateLinking(gold, head).coverage);
    ASSERT_LE(c.accuracy, c.coverage);
    ASSERT_GE(c.no_err, 1 - c.coverage - 1e-12);
  }
}

LinkDecision Decision(const std::string &id, const LinkMention &m,
                      DecisionAction action,
                      std::optional<std::string> article) {
  LinkDecision d;
  d.decision_id = id;
  d.locator = m.locator;
  d.action = action;
  d.article = std::move(article);
  d.timestamp = "2026-10-17T00:00:00Z";
  d.annotator = "ann";
  return d;
}

TEST(ApplyDecisionsTest, AcceptRejectAssign) {
  LinkMention m = Mention("mark", "John", "John", "d1");
  LinkMention other = Mention("mark", "John", "John", "d2");
  LinkTable table;
  table.Add(Mention("mark", "John", "John"), "A", 2);
  table.Add(Mention("mark", "John", "John"), "B", 1);
  MentionIndex index = IndexMentions(std::vector<LinkMention>{m, other});

  std::vector<LinkDecision> reject = {
      Decision("1", m, DecisionAction::kReject, "A")};
  LinkTable after = ApplyDecisions(table, reject, index);
  EXPECT_EQ(LinkCascade(m, after)->article, "B");
  // Rejection is scoped to the mention.
  EXPECT_EQ(LinkCascade(other, after)->article, "A");
  // The input table is unchanged.
  EXPECT_EQ(LinkCascade(m, table)->article, "A");

  std::vector<LinkDecision> assign = {
      Decision("2", m, DecisionAction::kAssign, "C"),
      Decision("3", m, DecisionAction::kAssign, "C"),
      Decision("4", m, DecisionAction::kAssign, "C")};
  LinkTable assigned = ApplyDecisions(table, assign, index);
  auto s = LinkCascade(other, assigned);
  EXPECT_EQ(s->article, "C");
  EXPECT_LE(s->rule_level, 2);

  std::vector<LinkDecision> bad = {
      Decision("5", m, DecisionAction::kAssign, std::nullopt)};
  EXPECT_THROW(ApplyDecisions(table, bad, index), ValidationError);
  LinkMention ghost = Mention("mark", "Nobody", "Nobody", "d9");
  std::vector<LinkDecision> unknown = {
      Decision("6", ghost, DecisionAction::kAccept, "A")};
  EXPECT_THROW(ApplyDecisions(table, unknown, index), ValidationError);
}

TEST(ApplyDecisionsTest, ReplayIsIdempotent) {
  std::mt19937 rng(13);
  std::vector<LinkMention> mentions;
  for (int i = 0; i < 10; ++i) {
    mentions.push_back(Mention("c", "t" + std::to_string(i % 4),
                               "h" + std::to_string(i % 3), "d", i + 1));
  }
  MentionIndex index = IndexMentions(mentions);
  std::vector<LinkDecision> log;
  for (int i = 0; i < 40; ++i) {
    const LinkMention &m = mentions[rng() % mentions.size()];
    auto action = static_cast<DecisionAction>(rng() % 3);
    log.push_back(Decision(std::to_string(i), m, action,
                           "a" + std::to_string(rng() % 4)));
  }
  LinkTable once = ApplyDecisions(LinkTable(), log, index);
  LinkTable twice = ApplyDecisions(once, log, index);
  EXPECT_EQ(once, twice);
  std::vector<LinkDecision> doubled = log;
  doubled.insert(doubled.end(), log.begin(), log.end());
  EXPECT_EQ(ApplyDecisions(LinkTable(), doubled, index), once);
}

TEST(DecisionJsonTest, RoundTrip) {
  LinkDecision d =
      Decision("x-1", Mention("c", "t", "h"), DecisionAction::kAssign, "Art");
  EXPECT_EQ(DecisionFromJson(DecisionToJson(d)), d);
  d.article.reset();
  d.action = DecisionAction::kReject;
  EXPECT_EQ(DecisionFromJson(DecisionToJson(d)), d);
  EXPECT_THROW(DecisionFromJson("{not json"), ParseError);
  EXPECT_THROW(DecisionFromJson("{\"decision_id\":\"1\"}"), ValidationError);
}

}  // namespace
}  // namespace nestrec
