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

// Candidate entity spans from part-of-speech tags, a training-span
// inventory, or dependency subtrees.

#ifndef NESTREC_MENTIONS_H_
#define NESTREC_MENTIONS_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nestrec/corpus.h"

namespace nestrec {

enum class MentionSource { kNoun, kLookup, kParse };

std::string_view MentionSourceName(MentionSource source);

struct MentionCandidate {
  int start = 0;
  int end = 0;
  int head = 0;
  MentionSource source = MentionSource::kParse;

  bool operator==(const MentionCandidate &) const = default;
};

struct MentionOptions {
  // Treat PRON as a nominal head too.
  bool include_pronouns = false;
  // Drop the head's own case markers (adpositions) from the span edges.
  bool trim_case_markers = true;
};

bool IsNominal(const Token &token, const MentionOptions &options = {});

// Every noun or proper noun as a one-token candidate.
std::vector<MentionCandidate> DetectNoun(const Sentence &sentence,
                                         const MentionOptions &options = {});

// Case-sensitive token-form sequences seen as gold spans in training.
class LookupInventory {
 public:
  void Add(std::string_view key);
  bool Contains(std::string_view key) const {
    return keys_.find(key) != keys_.end();
  }
  size_t size() const { return keys_.size(); }
  int max_length() const { return max_length_; }
  const std::set<std::string, std::less<>> &keys() const { return keys_; }

  // One space-joined sequence per line.
  std::string Serialize() const;
  static LookupInventory Parse(std::string_view text);

 private:
  std::set<std::string, std::less<>> keys_;
  int max_length_ = 0;
};

LookupInventory BuildLookupInventory(const Corpus &train);

// All inventory matches; partially overlapping matches are resolved in
// favor of the longer match, then the leftmost one.
std::vector<MentionCandidate> DetectLookup(const Sentence &sentence,
                                           const LookupInventory &inventory);

// Subtree projections of nominal heads with edge punctuation (and, by
// default, the head's edge case markers) trimmed.
// Throws ValidationError on an invalid tree.
std::vector<MentionCandidate> DetectParse(const Sentence &sentence,
                                          const MentionOptions &options = {});

// Sorts by start, then longer first, then head.
void SortCandidates(std::vector<MentionCandidate> &candidates);

}  // namespace nestrec

#endif  // NESTREC_MENTIONS_H_
