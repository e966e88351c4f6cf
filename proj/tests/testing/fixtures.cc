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

#include "testing/fixtures.h"

#include <algorithm>
#include <numeric>

namespace nestrec::testing {

Sentence MakeSentence(const std::vector<TokenSpec> &tokens,
                      const std::string &sent_id) {
  Sentence s;
  s.sent_id = sent_id;
  s.comments.push_back("# sent_id = " + sent_id);
  int index = 0;
  for (const TokenSpec &spec : tokens) {
    Token tok;
    tok.index = ++index;
    tok.form = spec.form;
    tok.lemma = spec.lemma.empty() ? spec.form : spec.lemma;
    tok.upos = spec.upos;
    tok.head = spec.head;
    tok.deprel = spec.deprel;
    s.tokens.push_back(std::move(tok));
  }
  return s;
}

EntitySpan MakeSpan(const Sentence &sentence, int start, int end,
                    EntityType type, int id) {
  EntitySpan span;
  span.start = start;
  span.end = end;
  span.etype = type;
  span.entity_id = id;
  span.head = SpanHead(sentence, start, end);
  return span;
}

Sentence ArmyOfDiocletian() {
  return MakeSentence({{"for", "ADP", 3, "case"},
                       {"the", "DET", 3, "det"},
                       {"army", "NOUN", 0, "root"},
                       {"of", "ADP", 5, "case"},
                       {"Diocletian", "PROPN", 3, "nmod"}});
}

Corpus SingleDocCorpus(std::vector<Sentence> sentences,
                       const std::string &doc_id,
                       const std::string &corpus_id) {
  Corpus corpus;
  corpus.corpus_id = corpus_id;
  Document doc;
  doc.doc_id = doc_id;
  doc.corpus_id = corpus_id;
  doc.sentences = std::move(sentences);
  if (!doc.sentences.empty()) {
    doc.sentences.front().comments.insert(
        doc.sentences.front().comments.begin(), "# newdoc id = " + doc_id);
  }
  corpus.documents.push_back(std::move(doc));
  return corpus;
}

std::vector<int> RandomTree(int n, std::mt19937 &rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> heads(n + 1, 0);
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    heads[order[k]] = order[pick(rng)];
  }
  heads[order[0]] = 0;
  return heads;
}

namespace {

void BuildProjective(int l, int r, int parent, std::vector<int> &heads,
                     std::mt19937 &rng) {
  if (l > r) return;
  int h = std::uniform_int_distribution<int>(l, r)(rng);
  heads[h] = parent;
  // Split each side into consecutive chunks, each a subtree under h.
  auto split = [&](int a, int b) {
    while (a <= b) {
      int len = std::uniform_int_distribution<int>(1, b - a + 1)(rng);
      BuildProjective(a, a + len - 1, h, heads, rng);
      a += len;
    }
  };
  split(l, h - 1);
  split(h + 1, r);
}

void BuildSpans(int l, int r, int depth, std::mt19937 &rng, int &next_id,
                bool with_identities, std::vector<EntitySpan> &out) {
  if (l > r || depth > 4) return;
  std::uniform_int_distribution<int> coin(0, 2);
  int pos = l;
  while (pos <= r) {
    if (coin(rng) == 0) {
      ++pos;
      continue;
    }
    int len = std::uniform_int_distribution<int>(1, r - pos + 1)(rng);
    EntitySpan span;
    span.start = pos;
    span.end = pos + len - 1;
    span.etype = kAllEntityTypes[std::uniform_int_distribution<int>(
        0, kNumEntityTypes - 1)(rng)];
    span.entity_id = next_id++;
    span.head = span.start;
    if (with_identities && coin(rng) == 0) {
      static const char *kIds[] = {"John_the_Baptist", "Kingdom_of_Israel_(united_monarchy)",
                                   "Paul of Thebes", "Jean-Paul", "100%_sure|x"};
      span.identity = kIds[std::uniform_int_distribution<int>(0, 4)(rng)];
      // Spaces are normalized to '_' by the encoding.
      std::replace(span.identity->begin(), span.identity->end(), ' ', '_');
    }
    out.push_back(span);
    // Occasionally a second span with the identical extent.
    if (coin(rng) == 0 && coin(rng) == 0) {
      EntitySpan twin = span;
      twin.entity_id = next_id++;
      twin.identity.reset();
      out.push_back(twin);
    }
    BuildSpans(span.start, span.end, depth + 1, rng, next_id, with_identities,
               out);
    pos = span.end + 1;
  }
}

}  // namespace

std::vector<int> RandomProjectiveTree(int n, std::mt19937 &rng) {
  std::vector<int> heads(n + 1, 0);
  BuildProjective(1, n, 0, heads, rng);
  return heads;
}

Sentence RandomSentence(const std::vector<int> &heads, std::mt19937 &rng) {
  static const char *kTags[] = {"NOUN", "PROPN", "VERB", "DET", "ADP",
                                "PUNCT", "NOUN", "PRON"};
  std::vector<TokenSpec> specs;
  std::uniform_int_distribution<int> tag(0, 7);
  for (size_t i = 1; i < heads.size(); ++i) {
    specs.push_back({"w" + std::to_string(i), kTags[tag(rng)], heads[i]});
  }
  return MakeSentence(specs);
}

std::vector<EntitySpan> RandomNestedSpans(int n, std::mt19937 &rng,
                                          bool with_identities) {
  std::vector<EntitySpan> spans;
  int next_id = 1;
  BuildSpans(1, n, 0, rng, next_id, with_identities, spans);
  return spans;
}

}  // namespace nestrec::testing
