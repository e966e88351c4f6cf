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

#include "nestrec/mentions.h"

#include <algorithm>

#include "nestrec/io.h"

namespace nestrec {

namespace {

bool CrossesAny(const MentionCandidate &c,
                const std::vector<MentionCandidate> &accepted) {
  for (const MentionCandidate &a : accepted) {
    if (Crosses(c.start, c.end, a.start, a.end)) return true;
  }
  return false;
}

}  // namespace

std::string_view MentionSourceName(MentionSource source) {
  switch (source) {
    case MentionSource::kNoun: return "noun";
    case MentionSource::kLookup: return "lookup";
    case MentionSource::kParse: return "parse";
  }
  return "parse";
}

bool IsNominal(const Token &token, const MentionOptions &options) {
  return token.upos == "NOUN" || token.upos == "PROPN" ||
         (options.include_pronouns && token.upos == "PRON");
}

void SortCandidates(std::vector<MentionCandidate> &candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const MentionCandidate &a, const MentionCandidate &b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.end != b.end) return a.end > b.end;
              return a.head < b.head;
            });
}

std::vector<MentionCandidate> DetectNoun(const Sentence &sentence,
                                         const MentionOptions &options) {
  std::vector<MentionCandidate> out;
  for (const Token &tok : sentence.tokens) {
    if (IsNominal(tok, options)) {
      out.push_back({tok.index, tok.index, tok.index, MentionSource::kNoun});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lookup

void LookupInventory::Add(std::string_view key) {
  if (key.empty()) return;
  int length = static_cast<int>(std::count(key.begin(), key.end(), ' ')) + 1;
  max_length_ = std::max(max_length_, length);
  keys_.emplace(key);
}

std::string LookupInventory::Serialize() const {
  std::string out;
  for (const std::string &key : keys_) {
    out += key;
    out += '\n';
  }
  return out;
}

LookupInventory LookupInventory::Parse(std::string_view text) {
  LookupInventory inv;
  for (std::string_view line : SplitLines(text)) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    inv.Add(line);
  }
  return inv;
}

LookupInventory BuildLookupInventory(const Corpus &train) {
  LookupInventory inv;
  for (const Document &doc : train.documents) {
    for (const Sentence &s : doc.sentences) {
      for (const EntitySpan &e : s.entities) inv.Add(s.Text(e.start, e.end));
    }
  }
  return inv;
}

std::vector<MentionCandidate> DetectLookup(const Sentence &sentence,
                                           const LookupInventory &inventory) {
  std::vector<MentionCandidate> matches;
  const int n = sentence.size();
  for (int i = 1; i <= n; ++i) {
    std::string key;
    for (int j = i; j <= n && j - i < inventory.max_length(); ++j) {
      if (j > i) key.push_back(' ');
      key += sentence.token(j).form;
      if (inventory.Contains(key)) {
        matches.push_back({i, j, SpanHead(sentence, i, j),
                           MentionSource::kLookup});
      }
    }
  }
  // Longer first, then leftmost; keep whatever does not cross a kept match.
  std::stable_sort(matches.begin(), matches.end(),
                   [](const MentionCandidate &a, const MentionCandidate &b) {
                     int la = a.end - a.start, lb = b.end - b.start;
                     if (la != lb) return la > lb;
                     return a.start < b.start;
                   });
  std::vector<MentionCandidate> kept;
  for (const MentionCandidate &m : matches) {
    if (!CrossesAny(m, kept)) kept.push_back(m);
  }
  SortCandidates(kept);
  return kept;
}

// ---------------------------------------------------------------------------
// Parse

std::vector<MentionCandidate> DetectParse(const Sentence &sentence,
                                          const MentionOptions &options) {
  if (auto defect = CheckTree(sentence)) {
    throw ValidationError("sentence " + sentence.sent_id + ": " + *defect);
  }
  TreeInfo tree = AnalyzeTree(sentence);
  struct Projection {
    MentionCandidate candidate;
    int depth;
  };
  std::vector<Projection> projections;
  for (const Token &tok : sentence.tokens) {
    if (!IsNominal(tok, options)) continue;
    int h = tok.index;
    int start = tree.leftmost[h];
    int end = tree.rightmost[h];
    auto trimmable = [&](int i) {
      const Token &edge = sentence.token(i);
      if (IsPunct(edge)) return true;
      return options.trim_case_markers && edge.head == h &&
             edge.deprel.substr(0, edge.deprel.find(':')) == "case";
    };
    while (start < h && trimmable(start)) ++start;
    while (end > h && trimmable(end)) --end;
    projections.push_back({{start, end, h, MentionSource::kParse},
                           tree.depth[h]});
  }
  // Non-projective trees can yield crossing projections: shallower heads
  // win, ties go to the leftmost start.
  std::stable_sort(projections.begin(), projections.end(),
                   [](const Projection &a, const Projection &b) {
                     if (a.depth != b.depth) return a.depth < b.depth;
                     return a.candidate.start < b.candidate.start;
                   });
  std::vector<MentionCandidate> kept;
  for (const Projection &p : projections) {
    if (!CrossesAny(p.candidate, kept)) kept.push_back(p.candidate);
  }
  SortCandidates(kept);
  return kept;
}

}  // namespace nestrec
