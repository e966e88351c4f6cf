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

// Builders and random generators shared by the test suites.

#ifndef NESTREC_TESTING_FIXTURES_H_
#define NESTREC_TESTING_FIXTURES_H_

#include <random>
#include <string>
#include <vector>

#include "nestrec/corpus.h"

namespace nestrec::testing {

struct TokenSpec {
  std::string form;
  std::string upos;
  int head;
  std::string deprel = "dep";
  std::string lemma = "";  // defaults to form
};

Sentence MakeSentence(const std::vector<TokenSpec> &tokens,
                      const std::string &sent_id = "s1");

EntitySpan MakeSpan(const Sentence &sentence, int start, int end,
                    EntityType type, int id);

// "for the army of Diocletian": for(ADP)->army, the(DET)->army,
// army(NOUN) root, of(ADP)->Diocletian, Diocletian(PROPN)->army.
Sentence ArmyOfDiocletian();

Corpus SingleDocCorpus(std::vector<Sentence> sentences,
                       const std::string &doc_id = "doc1",
                       const std::string &corpus_id = "c1");

// Uniformly random head assignment forming a tree (possibly
// non-projective).
std::vector<int> RandomTree(int n, std::mt19937 &rng);
// Random projective tree.
std::vector<int> RandomProjectiveTree(int n, std::mt19937 &rng);

// A sentence over the given heads with random NOUN/PROPN/VERB/DET/PUNCT
// tags.
Sentence RandomSentence(const std::vector<int> &heads, std::mt19937 &rng);

// A random set of strictly nested spans over 1..n (ids 1..k, random types,
// occasional identities).
std::vector<EntitySpan> RandomNestedSpans(int n, std::mt19937 &rng,
                                          bool with_identities = true);

}  // namespace nestrec::testing

#endif  // NESTREC_TESTING_FIXTURES_H_
