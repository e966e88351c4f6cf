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

// Head-lemma knowledge base and the entity classifiers built on it.

#ifndef NESTREC_KB_H_
#define NESTREC_KB_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nestrec/corpus.h"
#include "nestrec/crf.h"
#include "nestrec/mentions.h"

namespace nestrec {

struct KbEntry {
  std::string lemma;
  std::set<EntityType> types;
  EntityType majority = EntityType::kAbstract;
};

enum class KbProvenance { kTraining, kExternal };

class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  explicit KnowledgeBase(KbProvenance provenance) : provenance_(provenance) {}

  // Throws ValidationError if the entry has no types or its majority is not
  // among them. Replaces any entry with the same lemma.
  void Insert(KbEntry entry);
  const KbEntry *Find(std::string_view lemma) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, KbEntry, std::less<>> &entries() const {
    return entries_;
  }
  KbProvenance provenance() const { return provenance_; }

  // `lemma<TAB>type1|type2|...<TAB>majority` per line; '#' starts a comment.
  std::string Serialize() const;
  // Loaded KBs are marked external. Throws ParseError.
  static KnowledgeBase Parse(std::string_view text);

 private:
  std::map<std::string, KbEntry, std::less<>> entries_;
  KbProvenance provenance_ = KbProvenance::kExternal;
};

// One entry per gold head lemma; majority by count, ties alphabetical.
KnowledgeBase BuildKbFromTraining(const Corpus &train);

// Classified spans carry entity_id 0; ids are assigned by the caller.
std::vector<EntitySpan> ClassifyMajority(
    const std::vector<MentionCandidate> &candidates);

std::vector<EntitySpan> ClassifyKbOnly(
    const Sentence &sentence, const std::vector<MentionCandidate> &candidates,
    const KnowledgeBase &kb);

struct HybridOptions {
  double o_threshold = 0.95;
  // Apply the P(O) discard before consulting the KB. When false, KB-known
  // heads are never discarded.
  bool discard_first = true;
};

// `marginals` comes from CrfModel::Marginals on the sentence (row t is
// token t + 1).
std::vector<EntitySpan> ClassifyHybrid(
    const Sentence &sentence, const std::vector<MentionCandidate> &candidates,
    const KnowledgeBase &kb, const ScoreTable &marginals,
    const HybridOptions &options = {});

// Hybrid classification with an empty KB.
std::vector<EntitySpan> ClassifyCrf(
    const Sentence &sentence, const std::vector<MentionCandidate> &candidates,
    const ScoreTable &marginals, const HybridOptions &options = {});

}  // namespace nestrec

#endif  // NESTREC_KB_H_
