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

#include "nestrec/metrics.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>

#include "json.hpp"
#include "nestrec/errors.h"

namespace nestrec {

namespace {

template <typename Fn>
void ForEachSentencePair(const Corpus &a, const Corpus &b, Fn fn) {
  std::vector<const Sentence *> left, right;
  for (const Document &d : a.documents) {
    for (const Sentence &s : d.sentences) left.push_back(&s);
  }
  for (const Document &d : b.documents) {
    for (const Sentence &s : d.sentences) right.push_back(&s);
  }
  if (left.size() != right.size()) {
    throw ValidationError("sentence counts differ: " +
                          std::to_string(left.size()) + " vs " +
                          std::to_string(right.size()));
  }
  for (size_t i = 0; i < left.size(); ++i) {
    if (left[i]->size() != right[i]->size()) {
      throw ValidationError("token counts differ in sentence " +
                            left[i]->sent_id);
    }
    fn(*left[i], *right[i]);
  }
}

int HeadHits(const std::vector<EntitySpan> &a,
             const std::vector<EntitySpan> &b) {
  int hits = 0;
  for (const EntitySpan &x : a) {
    for (const EntitySpan &y : b) {
      if (y.head == x.head && y.etype == x.etype) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

}  // namespace

SpanAlignment AlignSpans(const std::vector<EntitySpan> &gold_in,
                         const std::vector<EntitySpan> &pred_in,
                         MatchMode mode, bool typed) {
  std::vector<EntitySpan> gold = gold_in, pred = pred_in;
  SortSpans(gold);
  SortSpans(pred);
  auto type_ok = [&](const EntitySpan &g, const EntitySpan &p) {
    return !typed || g.etype == p.etype;
  };
  // owner[p] = matched gold index, partner[g] = matched pred index.
  std::vector<int> owner(pred.size(), -1), partner(gold.size(), -1);
  auto pair = [&](int g, int p) {
    owner[p] = g;
    partner[g] = p;
  };

  for (size_t g = 0; g < gold.size(); ++g) {
    for (size_t p = 0; p < pred.size(); ++p) {
      if (owner[p] < 0 && pred[p].start == gold[g].start &&
          pred[p].end == gold[g].end && type_ok(gold[g], pred[p])) {
        pair(static_cast<int>(g), static_cast<int>(p));
        break;
      }
    }
  }

  if (mode == MatchMode::kFuzzy) {
    // Candidate preds per gold span, smallest first, then leftmost.
    std::vector<std::vector<int>> options(gold.size());
    for (size_t g = 0; g < gold.size(); ++g) {
      for (size_t p = 0; p < pred.size(); ++p) {
        if (pred[p].Covers(gold[g].head) && type_ok(gold[g], pred[p])) {
          options[g].push_back(static_cast<int>(p));
        }
      }
      std::stable_sort(options[g].begin(), options[g].end(), [&](int x, int y) {
        if (pred[x].length() != pred[y].length()) {
          return pred[x].length() < pred[y].length();
        }
        return pred[x].start < pred[y].start;
      });
    }
    for (size_t g = 0; g < gold.size(); ++g) {
      if (partner[g] >= 0) continue;
      for (int p : options[g]) {
        if (owner[p] < 0) {
          pair(static_cast<int>(g), p);
          break;
        }
      }
    }
    // Augmenting paths make the matching maximum, so a larger set of
    // allowed pairs never scores fewer matches.
    std::vector<bool> seen(pred.size());
    std::function<bool(int)> augment = [&](int g) {
      for (int p : options[g]) {
        if (seen[p]) continue;
        seen[p] = true;
        if (owner[p] < 0 || augment(owner[p])) {
          pair(g, p);
          return true;
        }
      }
      return false;
    };
    for (size_t g = 0; g < gold.size(); ++g) {
      if (partner[g] >= 0) continue;
      std::fill(seen.begin(), seen.end(), false);
      augment(static_cast<int>(g));
    }
  }

  SpanAlignment out;
  out.mode = mode;
  out.typed = typed;
  for (size_t g = 0; g < gold.size(); ++g) {
    if (partner[g] >= 0) {
      out.matched.emplace_back(gold[g], pred[partner[g]]);
    } else {
      out.unmatched_gold.push_back(gold[g]);
    }
  }
  for (size_t p = 0; p < pred.size(); ++p) {
    if (owner[p] < 0) out.unmatched_pred.push_back(pred[p]);
  }
  return out;
}

Prf MakePrf(int matched, int gold, int pred) {
  Prf prf;
  prf.matched = matched;
  prf.gold = gold;
  prf.pred = pred;
  prf.precision = pred > 0 ? static_cast<double>(matched) / pred : 0.0;
  prf.recall = gold > 0 ? static_cast<double>(matched) / gold : 0.0;
  double sum = prf.precision + prf.recall;
  prf.f1 = sum > 0 ? 2 * prf.precision * prf.recall / sum : 0.0;
  return prf;
}

Prf SpanPrf(const SpanAlignment &a) {
  int matched = static_cast<int>(a.matched.size());
  return MakePrf(matched, matched + static_cast<int>(a.unmatched_gold.size()),
                 matched + static_cast<int>(a.unmatched_pred.size()));
}

Prf CorpusPrf(const Corpus &gold, const Corpus &pred, MatchMode mode,
              bool typed) {
  int matched = 0, g = 0, p = 0;
  ForEachSentencePair(gold, pred, [&](const Sentence &gs, const Sentence &ps) {
    Prf prf = SpanPrf(AlignSpans(gs.entities, ps.entities, mode, typed));
    matched += prf.matched;
    g += prf.gold;
    p += prf.pred;
  });
  return MakePrf(matched, g, p);
}

std::vector<std::string> DeepestBioLabels(
    const Sentence &sentence, const std::vector<EntitySpan> &spans_in) {
  std::vector<EntitySpan> spans = spans_in;
  SortSpans(spans);
  std::vector<std::string> tags;
  for (int i = 1; i <= sentence.size(); ++i) {
    const EntitySpan *inner = nullptr;
    for (const EntitySpan &s : spans) {
      if (s.Covers(i) && (!inner || s.length() < inner->length())) inner = &s;
    }
    if (inner == nullptr) {
      tags.emplace_back("O");
    } else {
      tags.push_back((i == inner->start ? "B-" : "I-") +
                     std::string(EntityTypeName(inner->etype)));
    }
  }
  return tags;
}

double CohenKappa(std::span<const std::string> a,
                  std::span<const std::string> b) {
  if (a.size() != b.size()) {
    throw ValidationError("tag sequences differ in length");
  }
  if (a.empty()) return 0.0;
  const double n = static_cast<double>(a.size());
  std::map<std::string_view, std::pair<int, int>> marginals;
  int agree = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  double p_o = agree / n;
  double p_e = 0;
  for (const auto &[tag, counts] : marginals) {
    p_e += (counts.first / n) * (counts.second / n);
  }
  if (p_e >= 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

double HeadAccuracy(const std::vector<EntitySpan> &a,
                    const std::vector<EntitySpan> &b) {
  if (a.empty()) return 0.0;
  return static_cast<double>(HeadHits(a, b)) / a.size();
}

Agreement CorpusAgreement(const Corpus &a, const Corpus &b) {
  Agreement out;
  out.exact_typed = CorpusPrf(a, b, MatchMode::kExact, true);
  out.exact_untyped = CorpusPrf(a, b, MatchMode::kExact, false);
  out.fuzzy_typed = CorpusPrf(a, b, MatchMode::kFuzzy, true);
  std::vector<std::string> tags_a, tags_b;
  int heads = 0, hits = 0;
  ForEachSentencePair(a, b, [&](const Sentence &sa, const Sentence &sb) {
    for (std::string &t : DeepestBioLabels(sa, sa.entities)) {
      tags_a.push_back(std::move(t));
    }
    for (std::string &t : DeepestBioLabels(sb, sb.entities)) {
      tags_b.push_back(std::move(t));
    }
    heads += static_cast<int>(sa.entities.size());
    hits += HeadHits(sa.entities, sb.entities);
  });
  out.kappa = CohenKappa(tags_a, tags_b);
  out.head_accuracy = heads > 0 ? static_cast<double>(hits) / heads : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Reports

void ReportTable::Add(std::string method, std::vector<double> values) {
  if (values.size() != columns.size()) {
    throw std::invalid_argument("row width does not match columns");
  }
  rows.push_back({std::move(method), std::move(values)});
}

const ReportTable::Row *ReportTable::Find(std::string_view method) const {
  for (const Row &r : rows) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

std::string ReportTable::ToTsv() const {
  std::string out = "method";
  for (const std::string &c : columns) out += "\t" + c;
  out += '\n';
  char buf[32];
  for (const Row &r : rows) {
    out += r.method;
    for (double v : r.values) {
      std::snprintf(buf, sizeof(buf), "\t%.3f", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string ReportTable::ToJson() const {
  nlohmann::ordered_json j;
  j["table"] = name;
  j["columns"] = columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const Row &r : rows) {
    nlohmann::ordered_json row;
    row["method"] = r.method;
    for (size_t i = 0; i < columns.size(); ++i) row[columns[i]] = r.values[i];
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::vector<std::string> MentionColumns() {
  return {"exact_R", "exact_P", "exact_F1", "fuzzy_R", "fuzzy_P", "fuzzy_F1"};
}

std::vector<std::string> ClassificationColumns() {
  return {"span_R", "span_P", "span_F1", "head_R", "head_P", "head_F1"};
}

std::vector<std::string> LinkingColumns() { return {"acc", "cov", "no_err"}; }

std::vector<std::string> AgreementColumns() {
  return {"typed_kappa", "head_acc", "exact_typed_F1", "exact_untyped_F1",
          "fuzzy_typed_F1"};
}

}  // namespace nestrec
