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

// Link review state. Every named mention of the corpus is a review item.
// Decisions are appended to a JSONL log before they take effect, and the
// whole state is rebuilt by replaying that log over the base link table.

#ifndef NESTREC_REVIEW_SERVICE_H_
#define NESTREC_REVIEW_SERVICE_H_

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "nestrec/corpus.h"
#include "nestrec/linker.h"

namespace nestrec {

struct ReviewItem {
  std::string item_id;
  LinkMention mention;
  std::string left_context;   // up to 10 preceding tokens of the sentence
  std::string right_context;  // up to 10 following tokens
  std::optional<LinkSuggestion> suggestion;
  bool resolved = false;
  std::string decision_id;  // set when resolved
  std::string article;      // set when resolved

  std::string ToJson() const;
};

struct ReviewStats {
  int pending = 0;
  int resolved = 0;
  int total = 0;
  // Items with a current suggestion, over all items.
  double coverage = 0;
  // Current suggestions by cascade level (index 0 = level 1).
  std::array<int, kNumLinkLevels> levels{};
  int unsuggested = 0;

  std::string ToJson() const;
};

struct DecisionRequest {
  std::string item_id;
  std::string action;
  std::optional<std::string> article;
  std::string annotator;
};

struct DecisionResult {
  int status = 200;  // 200, 400, 404, 409 or 422
  std::string error;
  std::optional<ReviewItem> item;
};

class ReviewService {
 public:
  // Replays `log_path` if it exists. Throws ValidationError for a log that
  // does not match the corpus. A torn final line is ignored.
  ReviewService(Corpus corpus, LinkTable base, std::string log_path);

  size_t size() const { return items_.size(); }

  // Pending items in corpus order; 0 = no limit.
  std::vector<ReviewItem> Queue(size_t limit = 0) const;
  std::optional<ReviewItem> Item(const std::string &item_id) const;
  ReviewStats Stats() const;

  // Validates, durably logs and applies one decision. Thread-safe; writes
  // are serialized.
  DecisionResult Decide(const DecisionRequest &request);

  // The corpus with resolved articles written as identities.
  std::string Export() const;

  // Canonical dump of items, suggestions and the table, for replay checks.
  std::string StateDigest() const;

  // Overrides the clock used to stamp decisions.
  void set_clock(std::function<std::string()> clock) { clock_ = std::move(clock); }

 private:
  struct Resolution {
    std::string decision_id;
    std::string article;
  };

  ReviewItem Snapshot(size_t index) const;
  void Apply(const LinkDecision &decision);

  Corpus corpus_;
  std::string log_path_;
  std::vector<ReviewItem> items_;  // static parts only
  std::map<std::string, size_t> by_id_;
  std::map<std::string, size_t> by_locator_;
  MentionIndex mentions_;

  mutable std::shared_mutex mu_;
  std::shared_ptr<const LinkTable> table_;
  std::map<size_t, Resolution> resolved_;
  int decisions_ = 0;
  std::function<std::string()> clock_;
};

}  // namespace nestrec

#endif  // NESTREC_REVIEW_SERVICE_H_
