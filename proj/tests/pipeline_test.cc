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

#include "nestrec/pipeline.h"

#include <gtest/gtest.h>

#include "testing/fixtures.h"
#include "testing/synthetic.h"

namespace nestrec {
namespace {

using testing::SyntheticCorpus;
using testing::SyntheticOptions;

Corpus Make(int tokens, uint64_t seed, Partition part) {
  return SyntheticCorpus({.tokens = tokens, .seed = seed, .partition = part});
}

TEST(SyntheticTest, ValidAndRoundTrips) {
  Corpus c = Make(3000, 3, Partition::kTrain);
  EXPECT_GE(c.NumTokens(), 3000u);
  EXPECT_GT(c.NumEntities(), 300u);
  std::vector<Violation> v = ValidateCorpus(c);
  for (const Violation &x : v) ADD_FAILURE() << x.rule << ": " << x.detail;
  std::string text = SerializeConllu(c);
  Corpus back = ParseConllu(text, {.partition = Partition::kTrain});
  EXPECT_EQ(SerializeConllu(back), text);
  EXPECT_EQ(back.documents[0].corpus_id, "c0");
  EXPECT_EQ(SerializeConllu(Make(3000, 3, Partition::kTrain)), text);
}

TEST(PipelineTest, DetectionMethods) {
  Corpus gold = Make(4000, 5, Partition::kTest);
  Corpus parse = DetectCorpus(gold, DetectMethod::kParse);
  EXPECT_TRUE(ValidateCorpus(parse).empty());
  std::vector<double> row = MentionRow(gold, parse);
  EXPECT_GT(row[2], 0.8);   // exact F1
  EXPECT_GE(row[5], row[2]);  // fuzzy >= exact

  Corpus noun = DetectCorpus(gold, DetectMethod::kNoun);
  EXPECT_LT(MentionRow(gold, noun)[2], row[2]);

  EXPECT_THROW(DetectCorpus(gold, DetectMethod::kLookup), std::invalid_argument);
  LookupInventory inv = BuildLookupInventory(Make(4000, 6, Partition::kTrain));
  Corpus lookup = DetectCorpus(gold, DetectMethod::kLookup, &inv);
  EXPECT_GT(MentionRow(gold, lookup)[2], 0.0);
  // Gold against itself.
  for (double x : MentionRow(gold, gold)) EXPECT_EQ(x, 1.0);
}

TEST(PipelineTest, ClassificationAndLinking) {
  Corpus train = Make(6000, 7, Partition::kTrain);
  Corpus dev = Make(1500, 8, Partition::kDev);
  Corpus test = Make(2000, 9, Partition::kTest);

  Corpus mentions = DetectCorpus(test, DetectMethod::kParse);
  KnowledgeBase kb = BuildKbFromTraining(train);
  TrainConfig cfg;
  cfg.max_iters = 60;
  CrfModel crf = Train(CrfTrainingData(train), cfg);
  ClassifyResources res{&kb, &crf, {}, 1};

  std::map<ClassifyMethod, double> f1;
  for (ClassifyMethod m : {ClassifyMethod::kMajority, ClassifyMethod::kKb,
                           ClassifyMethod::kCrf, ClassifyMethod::kHybrid}) {
    Corpus out = ClassifyCorpus(mentions, m, res);
    EXPECT_TRUE(ValidateCorpus(out).empty());
    f1[m] = ClassificationRow(test, out)[5];
  }
  EXPECT_GT(f1[ClassifyMethod::kKb], f1[ClassifyMethod::kMajority]);
  EXPECT_GT(f1[ClassifyMethod::kHybrid], f1[ClassifyMethod::kMajority]);
  EXPECT_GT(f1[ClassifyMethod::kCrf], f1[ClassifyMethod::kMajority]);
  EXPECT_THROW(ClassifyCorpus(mentions, ClassifyMethod::kKb, {}),
               std::invalid_argument);

  std::vector<Corpus> sources = {train, dev};
  LinkTable table = BuildLinkTable(sources);
  std::vector<LinkMention> gold = CollectLinkMentions(test, true);
  ASSERT_FALSE(gold.empty());
  LinkScores cascade =
      EvaluateLinking(gold, PredictLinks(gold, table, LinkMethod::kCascade));
  LinkScores exact =
      EvaluateLinking(gold, PredictLinks(gold, table, LinkMethod::kExact));
  LinkScores head =
      EvaluateLinking(gold, PredictLinks(gold, table, LinkMethod::kHead));
  EXPECT_GE(cascade.coverage, exact.coverage);
  EXPECT_GE(cascade.coverage, head.coverage);
  EXPECT_GT(cascade.accuracy, 0.5);
}

TEST(PipelineTest, MethodNames) {
  for (auto m : {DetectMethod::kNoun, DetectMethod::kLookup,
                 DetectMethod::kParse}) {
    EXPECT_EQ(ParseDetectMethod(DetectMethodName(m)), m);
  }
  for (auto m : {ClassifyMethod::kMajority, ClassifyMethod::kKb,
                 ClassifyMethod::kCrf, ClassifyMethod::kHybrid}) {
    EXPECT_EQ(ParseClassifyMethod(ClassifyMethodName(m)), m);
  }
  for (auto m : {LinkMethod::kExact, LinkMethod::kHead, LinkMethod::kCascade}) {
    EXPECT_EQ(ParseLinkMethod(LinkMethodName(m)), m);
  }
  EXPECT_FALSE(ParseDetectMethod("rnn"));
}

}  // namespace
}  // namespace nestrec
