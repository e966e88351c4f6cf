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

#include "nestrec/linker.h"

#include <cstdlib>

#include "json.hpp"
#include "nestrec/errors.h"
#include "nestrec/io.h"

namespace nestrec {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, kNumLinkLevels> kLevelNames = {
    "ct", "t", "ch", "h"};

std::string Join(std::string_view a, std::string_view b) {
  std::string key(a);
  key += kKeySeparator;
  key += b;
  return key;
}

// Most frequent article not rejected for `locator`; ties lexicographic.
std::optional<std::pair<std::string, int>> Best(
    const LinkTable::Counts *counts, const LinkTable &table,
    const MentionLocator *locator) {
  if (counts == nullptr) return std::nullopt;
  std::optional<std::pair<std::string, int>> best;
  for (const auto &[article, count] : *counts) {
    if (locator && table.IsSuppressed(*locator, article)) continue;
    if (!best || count > best->second) best = {article, count};
  }
  return best;
}

}  // namespace

std::string_view LinkLevelName(int level) { return kLevelNames.at(level - 1); }

std::optional<int> ParseLinkLevel(std::string_view name) {
  for (int i = 0; i < kNumLinkLevels; ++i) {
    if (kLevelNames[i] == name) return i + 1;
  }
  return std::nullopt;
}

std::string MentionLocator::Key() const {
  return doc_id + std::string(kKeySeparator) + sent_id +
         std::string(kKeySeparator) + std::to_string(start) + ":" +
         std::to_string(end);
}

std::vector<LinkMention> CollectLinkMentions(const Corpus &corpus,
                                             bool linked_only) {
  std::vector<LinkMention> out;
  for (const Document &doc : corpus.documents) {
    for (const Sentence &s : doc.sentences) {
      std::vector<EntitySpan> spans = s.entities;
      SortSpans(spans);
      for (const EntitySpan &e : spans) {
        if (!s.IsNamed(e)) continue;
        if (linked_only && !e.identity) continue;
        LinkMention m;
        m.locator = {doc.doc_id, s.sent_id, e.start, e.end};
        m.corpus_id = doc.corpus_id;
        m.text = s.Text(e.start, e.end);
        m.head_lemma = s.token(e.head).lemma;
        m.identity = e.identity;
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

std::string_view DecisionActionName(DecisionAction action) {
  switch (action) {
    case DecisionAction::kAccept: return "accept";
    case DecisionAction::kReject: return "reject";
    case DecisionAction::kAssign: return "assign";
  }
  return "accept";
}

std::optional<DecisionAction> ParseDecisionAction(std::string_view name) {
  if (name == "accept") return DecisionAction::kAccept;
  if (name == "reject") return DecisionAction::kReject;
  if (name == "assign") return DecisionAction::kAssign;
  return std::nullopt;
}

std::string DecisionToJson(const LinkDecision &d) {
  json j = {{"decision_id", d.decision_id},
            {"doc_id", d.locator.doc_id},
            {"sent_id", d.locator.sent_id},
            {"start", d.locator.start},
            {"end", d.locator.end},
            {"action", DecisionActionName(d.action)},
            {"article", d.article ? json(*d.article) : json(nullptr)},
            {"timestamp", d.timestamp},
            {"annotator", d.annotator}};
  return j.dump();
}

LinkDecision DecisionFromJson(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError(0, "decision is not a JSON object");
  }
  LinkDecision d;
  try {
    d.decision_id = j.at("decision_id").get<std::string>();
    d.locator.doc_id = j.at("doc_id").get<std::string>();
    d.locator.sent_id = j.at("sent_id").get<std::string>();
    d.locator.start = j.at("start").get<int>();
    d.locator.end = j.at("end").get<int>();
    std::optional<DecisionAction> action =
        ParseDecisionAction(j.at("action").get<std::string>());
    if (!action) throw ValidationError("unknown decision action");
    d.action = *action;
    if (j.contains("article") && !j["article"].is_null()) {
      d.article = j["article"].get<std::string>();
    }
    d.timestamp = j.value("timestamp", "");
    d.annotator = j.value("annotator", "");
  } catch (const json::exception &e) {
    throw ValidationError(std::string("decision record: ") + e.what());
  }
  return d;
}

// ---------------------------------------------------------------------------
// LinkTable

std::string LinkTable::KeyFor(int level, const LinkMention &m) {
  switch (level) {
    case 1: return Join(m.corpus_id, m.text);
    case 2: return m.text;
    case 3: return Join(m.corpus_id, m.head_lemma);
    default: return m.head_lemma;
  }
}

void LinkTable::Add(const LinkMention &mention, const std::string &article,
                    int count) {
  for (int level = 1; level <= kNumLinkLevels; ++level) {
    levels_[level - 1][KeyFor(level, mention)][article] += count;
  }
}

const LinkTable::Counts *LinkTable::Find(int level,
                                         std::string_view key) const {
  const auto &map = levels_[level - 1];
  auto it = map.find(std::string(key));
  return it == map.end() ? nullptr : &it->second;
}

bool LinkTable::IsSuppressed(const MentionLocator &locator,
                             std::string_view article) const {
  auto it = suppressed_.find(locator.Key());
  return it != suppressed_.end() && it->second.count(std::string(article));
}

void LinkTable::Suppress(const MentionLocator &locator,
                         const std::string &article) {
  suppressed_[locator.Key()].insert(article);
}

bool LinkTable::empty() const {
  for (const auto &map : levels_) {
    if (!map.empty()) return false;
  }
  return true;
}

std::string LinkTable::Serialize() const {
  std::string out;
  for (int level = 1; level <= kNumLinkLevels; ++level) {
    for (const auto &[key, counts] : levels_[level - 1]) {
      for (const auto &[article, count] : counts) {
        out += LinkLevelName(level);
        out += '\t';
        out += key;
        out += '\t';
        out += article;
        out += '\t';
        out += std::to_string(count);
        out += '\n';
      }
    }
  }
  return out;
}

LinkTable LinkTable::Parse(std::string_view text) {
  LinkTable table;
  int line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> cols = Split(line, '\t');
    if (cols.size() != 4) {
      throw ParseError(line_no, "expected level, key, article and count");
    }
    std::optional<int> level = ParseLinkLevel(cols[0]);
    if (!level) throw ParseError(line_no, "unknown level");
    std::string count_text(cols[3]);
    char *end = nullptr;
    long count = std::strtol(count_text.c_str(), &end, 10);
    if (count_text.empty() || *end != '\0' || count <= 0) {
      throw ParseError(line_no, "count must be a positive integer");
    }
    table.levels_[*level - 1][std::string(cols[1])][std::string(cols[2])] +=
        static_cast<int>(count);
  }
  return table;
}

LinkTable BuildLinkTable(std::span<const Corpus> corpora) {
  LinkTable table;
  for (const Corpus &corpus : corpora) {
    for (const LinkMention &m : CollectLinkMentions(corpus, true)) {
      table.Add(m, *m.identity);
    }
  }
  return table;
}

std::optional<LinkSuggestion> LinkCascade(const LinkMention &mention,
                                          const LinkTable &table) {
  for (int level = 1; level <= kNumLinkLevels; ++level) {
    auto best = Best(table.Find(level, LinkTable::KeyFor(level, mention)),
                     table, &mention.locator);
    if (best) return LinkSuggestion{best->first, level, best->second};
  }
  return std::nullopt;
}

std::optional<std::string> LinkExactBaseline(const LinkMention &mention,
                                             const LinkTable &table) {
  auto best = Best(table.Find(2, mention.text), table, nullptr);
  if (!best) return std::nullopt;
  return best->first;
}

std::optional<std::string> LinkHeadBaseline(const LinkMention &mention,
                                            const LinkTable &table) {
  auto best = Best(table.Find(4, mention.head_lemma), table, nullptr);
  if (!best) return std::nullopt;
  return best->first;
}

LinkScores EvaluateLinking(
    std::span<const LinkMention> gold,
    std::span<const std::optional<std::string>> predictions) {
  if (gold.empty()) throw ValidationError("no gold mentions to evaluate");
  if (gold.size() != predictions.size()) {
    throw ValidationError("gold and prediction counts differ");
  }
  LinkScores s;
  s.total = static_cast<int>(gold.size());
  for (size_t i = 0; i < gold.size(); ++i) {
    if (!predictions[i]) continue;
    ++s.answered;
    if (gold[i].identity && *predictions[i] == *gold[i].identity) ++s.correct;
  }
  s.accuracy = static_cast<double>(s.correct) / s.total;
  s.coverage = static_cast<double>(s.answered) / s.total;
  s.no_err = static_cast<double>(s.correct + (s.total - s.answered)) / s.total;
  return s;
}

MentionIndex IndexMentions(std::span<const LinkMention> mentions) {
  MentionIndex index;
  for (const LinkMention &m : mentions) index.emplace(m.locator.Key(), m);
  return index;
}

LinkTable ApplyDecisions(const LinkTable &table,
                         std::span<const LinkDecision> decisions,
                         const MentionIndex &mentions) {
  LinkTable out = table;
  for (const LinkDecision &d : decisions) {
    if (out.HasApplied(d.decision_id)) continue;
    if (d.action != DecisionAction::kReject && !d.article) {
      throw ValidationError("decision " + d.decision_id + " needs an article");
    }
    auto it = mentions.find(d.locator.Key());
    if (it == mentions.end()) {
      throw ValidationError("decision " + d.decision_id +
                            " refers to an unknown mention");
    }
    if (d.action == DecisionAction::kReject) {
      if (d.article) out.Suppress(d.locator, *d.article);
    } else {
      out.Add(it->second, *d.article);
    }
    out.MarkApplied(d.decision_id);
  }
  return out;
}

}  // namespace nestrec
