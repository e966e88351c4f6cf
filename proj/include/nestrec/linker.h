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

// Frequency-based entity linking. Mentions are looked up by text and by
// head lemma, first within their own corpus and then globally:
//
//   level 1 (ct)  corpus + text
//   level 2 (t)   text
//   level 3 (ch)  corpus + head lemma
//   level 4 (h)   head lemma
//
// The first level with a known key answers with its most frequent article.

#ifndef NESTREC_LINKER_H_
#define NESTREC_LINKER_H_

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nestrec/corpus.h"

namespace nestrec {

// Separates the parts of composite keys.
inline constexpr std::string_view kKeySeparator = "\x1f";

inline constexpr int kNumLinkLevels = 4;
std::string_view LinkLevelName(int level);  // 1 -> "ct", ..., 4 -> "h"
std::optional<int> ParseLinkLevel(std::string_view name);

struct MentionLocator {
  std::string doc_id;
  std::string sent_id;
  int start = 0;
  int end = 0;

  std::string Key() const;
  auto operator<=>(const MentionLocator &) const = default;
};

struct LinkMention {
  MentionLocator locator;
  std::string corpus_id;
  std::string text;
  std::string head_lemma;
  std::optional<std::string> identity;  // gold article, when annotated
};

// Named spans (head PROPN) in document order. With `linked_only`, only
// spans carrying an identity.
std::vector<LinkMention> CollectLinkMentions(const Corpus &corpus,
                                             bool linked_only);

struct LinkSuggestion {
  std::string article;
  int rule_level = 0;
  int support_count = 0;

  bool operator==(const LinkSuggestion &) const = default;
};

enum class DecisionAction { kAccept, kReject, kAssign };
std::string_view DecisionActionName(DecisionAction action);
std::optional<DecisionAction> ParseDecisionAction(std::string_view name);

struct LinkDecision {
  std::string decision_id;
  MentionLocator locator;
  DecisionAction action = DecisionAction::kAccept;
  std::optional<std::string> article;
  std::string timestamp;
  std::string annotator;

  bool operator==(const LinkDecision &) const = default;
};

// One JSON object per line. FromJson throws ParseError on malformed input
// and ValidationError when a required field is missing.
std::string DecisionToJson(const LinkDecision &decision);
LinkDecision DecisionFromJson(std::string_view line);

class LinkTable {
 public:
  using Counts = std::map<std::string, int>;

  // Counts one (mention, article) pairing at all four levels.
  void Add(const LinkMention &mention, const std::string &article,
           int count = 1);

  // Counts under `key` at `level` (1..4), or nullptr.
  const Counts *Find(int level, std::string_view key) const;
  static std::string KeyFor(int level, const LinkMention &mention);

  bool IsSuppressed(const MentionLocator &locator,
                    std::string_view article) const;
  void Suppress(const MentionLocator &locator, const std::string &article);
  bool HasApplied(std::string_view decision_id) const {
    return applied_.count(std::string(decision_id)) > 0;
  }
  void MarkApplied(const std::string &decision_id) {
    applied_.insert(decision_id);
  }

  bool empty() const;
  const std::map<std::string, Counts> &level(int level) const {
    return levels_[level - 1];
  }

  // `level<TAB>key<TAB>article<TAB>count` lines. Suppressions and applied
  // decision ids are not part of the file; they come from the decision log.
  std::string Serialize() const;
  static LinkTable Parse(std::string_view text);

  bool operator==(const LinkTable &) const = default;

 private:
  std::array<std::map<std::string, Counts>, kNumLinkLevels> levels_;
  std::map<std::string, std::set<std::string>> suppressed_;
  std::set<std::string> applied_;
};

// Counts every mention with an identity.
LinkTable BuildLinkTable(std::span<const Corpus> corpora);

// First level with an unsuppressed article wins; ties go to the
// lexicographically smallest article.
std::optional<LinkSuggestion> LinkCascade(const LinkMention &mention,
                                          const LinkTable &table);
std::optional<std::string> LinkExactBaseline(const LinkMention &mention,
                                             const LinkTable &table);
std::optional<std::string> LinkHeadBaseline(const LinkMention &mention,
                                            const LinkTable &table);

struct LinkScores {
  double accuracy = 0;
  double coverage = 0;
  double no_err = 0;
  int total = 0;
  int correct = 0;
  int answered = 0;
};

// `predictions[i]` answers `gold[i]`. Throws ValidationError on empty gold
// or a size mismatch.
LinkScores EvaluateLinking(std::span<const LinkMention> gold,
                           std::span<const std::optional<std::string>> predictions);

// Locator key -> mention, for resolving decisions.
using MentionIndex = std::map<std::string, LinkMention>;
MentionIndex IndexMentions(std::span<const LinkMention> mentions);

// Returns a new table with the decisions applied. Decisions whose id was
// already applied are skipped. Throws ValidationError for an assign without
// an article or an unknown locator.
LinkTable ApplyDecisions(const LinkTable &table,
                         std::span<const LinkDecision> decisions,
                         const MentionIndex &mentions);

}  // namespace nestrec

#endif  // NESTREC_LINKER_H_
