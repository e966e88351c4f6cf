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

// Span alignment, precision/recall/F1, agreement measures and report
// tables.

#ifndef NESTREC_METRICS_H_
#define NESTREC_METRICS_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nestrec/corpus.h"

namespace nestrec {

enum class MatchMode { kExact, kFuzzy };

struct SpanAlignment {
  std::vector<std::pair<EntitySpan, EntitySpan>> matched;  // (gold, pred)
  std::vector<EntitySpan> unmatched_gold;
  std::vector<EntitySpan> unmatched_pred;
  MatchMode mode = MatchMode::kExact;
  bool typed = false;
};

// One-to-one matching within a sentence. Identical boundaries pair first;
// in fuzzy mode each remaining gold span then takes the smallest unmatched
// pred span containing its head (ties: leftmost start), and augmenting
// paths complete the result to a maximum matching.
SpanAlignment AlignSpans(const std::vector<EntitySpan> &gold,
                         const std::vector<EntitySpan> &pred, MatchMode mode,
                         bool typed);

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int matched = 0;
  int gold = 0;
  int pred = 0;
};

Prf MakePrf(int matched, int gold, int pred);
Prf SpanPrf(const SpanAlignment &alignment);

// Micro-averaged over all sentences. Throws ValidationError when the two
// corpora do not have the same sentences and token counts.
Prf CorpusPrf(const Corpus &gold, const Corpus &pred, MatchMode mode,
              bool typed);

// Per-token tags from the innermost covering span: "B-<type>" at that
// span's first token, "I-<type>" after it, "O" outside all spans.
std::vector<std::string> DeepestBioLabels(const Sentence &sentence,
                                          const std::vector<EntitySpan> &spans);

// Throws ValidationError on a length mismatch. Returns 1 when chance
// agreement is 1, and 0 for empty input.
double CohenKappa(std::span<const std::string> a,
                  std::span<const std::string> b);

// Fraction of A's span heads for which B has a span with the same head and
// type; 0 when A has no spans.
double HeadAccuracy(const std::vector<EntitySpan> &a,
                    const std::vector<EntitySpan> &b);

// Agreement between two annotations of the same corpus.
struct Agreement {
  Prf exact_typed;
  Prf exact_untyped;
  Prf fuzzy_typed;
  double kappa = 0;
  double head_accuracy = 0;
};
Agreement CorpusAgreement(const Corpus &a, const Corpus &b);

// A results table: one row per method, one numeric column per metric.
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  struct Row {
    std::string method;
    std::vector<double> values;
  };
  std::vector<Row> rows;

  void Add(std::string method, std::vector<double> values);
  const Row *Find(std::string_view method) const;
  // Header "method<TAB>col..." then one line per row, values to 3 places.
  std::string ToTsv() const;
  // {"table": name, "columns": [...], "rows": [{"method": m, col: v...}]}
  std::string ToJson() const;
};

// Column layouts shared by the CLI and the acceptance checks.
std::vector<std::string> MentionColumns();         // exact R P F1, fuzzy R P F1
std::vector<std::string> ClassificationColumns();  // span R P F1, head R P F1
std::vector<std::string> LinkingColumns();         // acc cov no_err
std::vector<std::string> AgreementColumns();

}  // namespace nestrec

#endif  // NESTREC_METRICS_H_
