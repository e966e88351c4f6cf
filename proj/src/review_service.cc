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

#include "nestrec/review_service.h"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <mutex>

#include "json.hpp"
#include "nestrec/errors.h"
#include "nestrec/io.h"

namespace nestrec {

using ojson = nlohmann::ordered_json;

namespace {

constexpr int kContextTokens = 10;

std::string UtcNow() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson SuggestionJson(const std::optional<LinkSuggestion> &s) {
  if (!s) return nullptr;
  return {{"article", s->article},
          {"rule_level", s->rule_level},
          {"level_name", LinkLevelName(s->rule_level)},
          {"support_count", s->support_count}};
}

ojson ItemJson(const ReviewItem &item) {
  ojson j;
  j["item_id"] = item.item_id;
  j["doc_id"] = item.mention.locator.doc_id;
  j["sent_id"] = item.mention.locator.sent_id;
  j["start"] = item.mention.locator.start;
  j["end"] = item.mention.locator.end;
  j["corpus_id"] = item.mention.corpus_id;
  j["text"] = item.mention.text;
  j["head_lemma"] = item.mention.head_lemma;
  j["left_context"] = item.left_context;
  j["right_context"] = item.right_context;
  j["suggestion"] = SuggestionJson(item.suggestion);
  j["status"] = item.resolved ? "resolved" : "pending";
  if (item.resolved) {
    j["decision_id"] = item.decision_id;
    j["article"] = item.article;
  }
  return j;
}

}  // namespace

std::string ReviewItem::ToJson() const { return ItemJson(*this).dump(); }

std::string ReviewStats::ToJson() const {
  ojson j;
  j["pending"] = pending;
  j["resolved"] = resolved;
  j["total"] = total;
  j["coverage"] = coverage;
  ojson levels_json;
  for (int l = 1; l <= kNumLinkLevels; ++l) {
    levels_json[std::string(LinkLevelName(l))] = levels[l - 1];
  }
  levels_json["none"] = unsuggested;
  j["levels"] = levels_json;
  return j.dump();
}

ReviewService::ReviewService(Corpus corpus, LinkTable base,
                             std::string log_path)
    : corpus_(std::move(corpus)),
      log_path_(std::move(log_path)),
      table_(std::make_shared<const LinkTable>(std::move(base))),
      clock_(UtcNow) {
  std::vector<LinkMention> mentions = CollectLinkMentions(corpus_, false);
  mentions_ = IndexMentions(mentions);
  std::map<std::pair<std::string, std::string>, const Sentence *> sentences;
  for (const Document &d : corpus_.documents) {
    for (const Sentence &s : d.sentences) sentences[{d.doc_id, s.sent_id}] = &s;
  }
  for (LinkMention &m : mentions) {
    ReviewItem item;
    item.item_id = "m" + std::to_string(items_.size() + 1);
    const Sentence &s = *sentences.at({m.locator.doc_id, m.locator.sent_id});
    int from = std::max(1, m.locator.start - kContextTokens);
    if (from < m.locator.start) item.left_context = s.Text(from, m.locator.start - 1);
    int to = std::min(s.size(), m.locator.end + kContextTokens);
    if (to > m.locator.end) item.right_context = s.Text(m.locator.end + 1, to);
    item.mention = std::move(m);
    by_id_[item.item_id] = items_.size();
    by_locator_[item.mention.locator.Key()] = items_.size();
    items_.push_back(std::move(item));
  }

  if (!std::filesystem::exists(log_path_)) return;
  std::string text = ReadFile(log_path_);
  std::vector<std::string_view> lines = SplitLines(text);
  const bool torn = !text.empty() && text.back() != '\n';
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    LinkDecision d;
    try {
      d = DecisionFromJson(lines[i]);
    } catch (const Error &) {
      if (torn && i + 1 == lines.size()) break;
      throw;
    }
    if (!by_locator_.count(d.locator.Key())) {
      throw ValidationError("decision " + d.decision_id +
                            " refers to a mention not in the corpus");
    }
    Apply(d);
  }
}

void ReviewService::Apply(const LinkDecision &d) {
  if (table_->HasApplied(d.decision_id)) return;
  std::vector<LinkDecision> one = {d};
  table_ = std::make_shared<const LinkTable>(
      ApplyDecisions(*table_, one, mentions_));
  ++decisions_;
  if (d.action != DecisionAction::kReject) {
    resolved_[by_locator_.at(d.locator.Key())] = {d.decision_id, *d.article};
  }
}

ReviewItem ReviewService::Snapshot(size_t index) const {
  ReviewItem item = items_[index];
  auto it = resolved_.find(index);
  if (it != resolved_.end()) {
    item.resolved = true;
    item.decision_id = it->second.decision_id;
    item.article = it->second.article;
  }
  item.suggestion = LinkCascade(item.mention, *table_);
  return item;
}

std::vector<ReviewItem> ReviewService::Queue(size_t limit) const {
  std::shared_lock lock(mu_);
  std::vector<ReviewItem> out;
  for (size_t i = 0; i < items_.size(); ++i) {
    if (resolved_.count(i)) continue;
    out.push_back(Snapshot(i));
    if (limit > 0 && out.size() >= limit) break;
  }
  return out;
}

std::optional<ReviewItem> ReviewService::Item(const std::string &id) const {
  std::shared_lock lock(mu_);
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return Snapshot(it->second);
}

ReviewStats ReviewService::Stats() const {
  std::shared_lock lock(mu_);
  ReviewStats s;
  s.total = static_cast<int>(items_.size());
  s.resolved = static_cast<int>(resolved_.size());
  s.pending = s.total - s.resolved;
  int answered = 0;
  for (const ReviewItem &item : items_) {
    std::optional<LinkSuggestion> sug = LinkCascade(item.mention, *table_);
    if (sug) {
      ++answered;
      ++s.levels[sug->rule_level - 1];
    } else {
      ++s.unsuggested;
    }
  }
  s.coverage = s.total > 0 ? static_cast<double>(answered) / s.total : 0.0;
  return s;
}

DecisionResult ReviewService::Decide(const DecisionRequest &req) {
  std::optional<DecisionAction> action = ParseDecisionAction(req.action);
  if (!action) return {400, "unknown action '" + req.action + "'", {}};
  std::unique_lock lock(mu_);
  auto it = by_id_.find(req.item_id);
  if (it == by_id_.end()) return {404, "unknown item " + req.item_id, {}};
  const size_t index = it->second;
  if (resolved_.count(index)) return {409, "item already resolved", {}};

  LinkDecision d;
  d.decision_id = "d" + std::to_string(decisions_ + 1);
  d.locator = items_[index].mention.locator;
  d.action = *action;
  d.timestamp = clock_();
  d.annotator = req.annotator;
  if (*action == DecisionAction::kAssign) {
    if (!req.article || req.article->empty()) {
      return {422, "assign needs an article", {}};
    }
    d.article = req.article;
  } else {
    std::optional<LinkSuggestion> s = LinkCascade(items_[index].mention, *table_);
    if (!s) return {422, "item has no suggestion to " + req.action, {}};
    d.article = s->article;
  }
  AppendLineDurable(log_path_, DecisionToJson(d));
  Apply(d);
  return {200, "", Snapshot(index)};
}

std::string ReviewService::Export() const {
  std::shared_lock lock(mu_);
  Corpus out = corpus_;
  for (Document &doc : out.documents) {
    for (Sentence &s : doc.sentences) {
      for (EntitySpan &e : s.entities) {
        MentionLocator loc{doc.doc_id, s.sent_id, e.start, e.end};
        auto it = by_locator_.find(loc.Key());
        if (it == by_locator_.end()) continue;
        auto r = resolved_.find(it->second);
        if (r != resolved_.end()) e.identity = r->second.article;
      }
    }
  }
  return SerializeConllu(out);
}

std::string ReviewService::StateDigest() const {
  std::shared_lock lock(mu_);
  ojson j;
  j["decisions"] = decisions_;
  j["items"] = ojson::array();
  for (size_t i = 0; i < items_.size(); ++i) {
    j["items"].push_back(ItemJson(Snapshot(i)));
  }
  j["table"] = table_->Serialize();
  return j.dump();
}

}  // namespace nestrec
