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

#include "nestrec/kb.h"

#include <array>
#include <optional>

#include "nestrec/errors.h"
#include "nestrec/io.h"

namespace nestrec {

namespace {

EntitySpan Typed(const MentionCandidate &c, EntityType type) {
  EntitySpan span;
  span.start = c.start;
  span.end = c.end;
  span.head = c.head;
  span.etype = type;
  span.entity_id = 0;
  return span;
}

// Argmax over non-O labels; ties go to the lower label.
EntityType BestNonOutside(const std::vector<double> &row) {
  int best = 1;
  for (int y = 2; y < static_cast<int>(row.size()); ++y) {
    if (row[y] > row[best]) best = y;
  }
  return TypeOfLabel(best);
}

EntityType BestKbType(const KbEntry &entry, const std::vector<double> &row) {
  EntityType best = *entry.types.begin();
  for (EntityType t : entry.types) {
    if (row[LabelOf(t)] > row[LabelOf(best)]) best = t;
  }
  return best;
}

}  // namespace

void KnowledgeBase::Insert(KbEntry entry) {
  if (entry.types.empty()) {
    throw ValidationError("KB entry '" + entry.lemma + "' has no types");
  }
  if (!entry.types.count(entry.majority)) {
    throw ValidationError("KB entry '" + entry.lemma +
                          "' majority is not among its types");
  }
  std::string key = entry.lemma;
  entries_[key] = std::move(entry);
}

const KbEntry *KnowledgeBase::Find(std::string_view lemma) const {
  auto it = entries_.find(lemma);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string KnowledgeBase::Serialize() const {
  std::string out;
  for (const auto &[lemma, entry] : entries_) {
    out += lemma;
    out += '\t';
    bool first = true;
    for (EntityType t : entry.types) {
      if (!first) out += '|';
      out += EntityTypeName(t);
      first = false;
    }
    out += '\t';
    out += EntityTypeName(entry.majority);
    out += '\n';
  }
  return out;
}

KnowledgeBase KnowledgeBase::Parse(std::string_view text) {
  KnowledgeBase kb(KbProvenance::kExternal);
  int line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> cols = Split(line, '\t');
    if (cols.size() != 3 || cols[0].empty()) {
      throw ParseError(line_no, "expected lemma, types and majority columns");
    }
    KbEntry entry;
    entry.lemma = std::string(cols[0]);
    for (std::string_view name : Split(cols[1], '|')) {
      std::optional<EntityType> t = ParseEntityType(name);
      if (!t) throw ParseError(line_no, "unknown type '" + std::string(name) + "'");
      entry.types.insert(*t);
    }
    std::optional<EntityType> majority = ParseEntityType(cols[2]);
    if (!majority) {
      throw ParseError(line_no, "unknown type '" + std::string(cols[2]) + "'");
    }
    entry.majority = *majority;
    try {
      kb.Insert(std::move(entry));
    } catch (const ValidationError &e) {
      throw ParseError(line_no, e.what());
    }
  }
  return kb;
}

KnowledgeBase BuildKbFromTraining(const Corpus &train) {
  std::map<std::string, std::array<int, kNumEntityTypes>> counts;
  for (const Document &doc : train.documents) {
    for (const Sentence &s : doc.sentences) {
      for (const EntitySpan &e : s.entities) {
        auto [it, inserted] = counts.try_emplace(s.token(e.head).lemma);
        if (inserted) it->second.fill(0);
        ++it->second[static_cast<int>(e.etype)];
      }
    }
  }
  KnowledgeBase kb(KbProvenance::kTraining);
  for (const auto &[lemma, c] : counts) {
    KbEntry entry;
    entry.lemma = lemma;
    int best = -1;
    for (int t = 0; t < kNumEntityTypes; ++t) {
      if (c[t] == 0) continue;
      entry.types.insert(static_cast<EntityType>(t));
      if (best < 0 || c[t] > c[best]) best = t;
    }
    entry.majority = static_cast<EntityType>(best);
    kb.Insert(std::move(entry));
  }
  return kb;
}

std::vector<EntitySpan> ClassifyMajority(
    const std::vector<MentionCandidate> &candidates) {
  std::vector<EntitySpan> out;
  for (const MentionCandidate &c : candidates) {
    out.push_back(Typed(c, EntityType::kAbstract));
  }
  return out;
}

std::vector<EntitySpan> ClassifyKbOnly(
    const Sentence &sentence, const std::vector<MentionCandidate> &candidates,
    const KnowledgeBase &kb) {
  std::vector<EntitySpan> out;
  for (const MentionCandidate &c : candidates) {
    const KbEntry *entry = kb.Find(sentence.token(c.head).lemma);
    out.push_back(Typed(c, entry ? entry->majority : EntityType::kAbstract));
  }
  return out;
}

std::vector<EntitySpan> ClassifyHybrid(
    const Sentence &sentence, const std::vector<MentionCandidate> &candidates,
    const KnowledgeBase &kb, const ScoreTable &marginals,
    const HybridOptions &options) {
  if (static_cast<int>(marginals.size()) != sentence.size()) {
    throw std::invalid_argument("marginals do not match sentence length");
  }
  std::vector<EntitySpan> out;
  for (const MentionCandidate &c : candidates) {
    const std::vector<double> &row = marginals[c.head - 1];
    const bool confident_o = row[kOutsideLabel] > options.o_threshold;
    const KbEntry *entry = kb.Find(sentence.token(c.head).lemma);
    if (confident_o && (options.discard_first || entry == nullptr)) continue;
    if (entry == nullptr) {
      out.push_back(Typed(c, BestNonOutside(row)));
    } else if (entry->types.size() == 1) {
      out.push_back(Typed(c, *entry->types.begin()));
    } else {
      out.push_back(Typed(c, BestKbType(*entry, row)));
    }
  }
  return out;
}

std::vector<EntitySpan> ClassifyCrf(
    const Sentence &sentence, const std::vector<MentionCandidate> &candidates,
    const ScoreTable &marginals, const HybridOptions &options) {
  return ClassifyHybrid(sentence, candidates, KnowledgeBase(), marginals,
                        options);
}

}  // namespace nestrec
