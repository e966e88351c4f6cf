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

// Corpus-level drivers for detection, classification, linking and the
// standard evaluation tables.

#ifndef NESTREC_PIPELINE_H_
#define NESTREC_PIPELINE_H_

#include <optional>
#include <string_view>
#include <vector>

#include "nestrec/corpus.h"
#include "nestrec/crf.h"
#include "nestrec/kb.h"
#include "nestrec/linker.h"
#include "nestrec/mentions.h"
#include "nestrec/metrics.h"

namespace nestrec {

enum class DetectMethod { kNoun, kLookup, kParse };
std::optional<DetectMethod> ParseDetectMethod(std::string_view name);
std::string_view DetectMethodName(DetectMethod method);

enum class ClassifyMethod { kMajority, kKb, kCrf, kHybrid };
std::optional<ClassifyMethod> ParseClassifyMethod(std::string_view name);
std::string_view ClassifyMethodName(ClassifyMethod method);

enum class LinkMethod { kExact, kHead, kCascade };
std::optional<LinkMethod> ParseLinkMethod(std::string_view name);
std::string_view LinkMethodName(LinkMethod method);

// Renumbers entity ids 1..k per document in span order.
void AssignEntityIds(Corpus &corpus);

// Replaces all entities with detected candidates. Detected spans are typed
// `abstract` until classified. `inventory` is required for kLookup.
Corpus DetectCorpus(const Corpus &input, DetectMethod method,
                    const LookupInventory *inventory = nullptr,
                    const MentionOptions &options = {});

// CRF training sequences, one per sentence.
std::vector<LabeledSequence> CrfTrainingData(const Corpus &train);

struct ClassifyResources {
  const KnowledgeBase *kb = nullptr;  // kKb, kHybrid
  const CrfModel *crf = nullptr;      // kCrf, kHybrid
  HybridOptions hybrid;
  int threads = 0;  // CRF marginals; 0 = hardware concurrency
};

// Types the existing spans of `mentions` (their boundaries and heads are the
// candidates). Throws std::invalid_argument when a required resource is
// missing.
Corpus ClassifyCorpus(const Corpus &mentions, ClassifyMethod method,
                      const ClassifyResources &resources);

// One answer per gold mention.
std::vector<std::optional<std::string>> PredictLinks(
    std::span<const LinkMention> mentions, const LinkTable &table,
    LinkMethod method);

// Standard result rows.
std::vector<double> MentionRow(const Corpus &gold, const Corpus &pred);
std::vector<double> ClassificationRow(const Corpus &gold, const Corpus &pred);
std::vector<double> LinkingRow(const LinkScores &scores);

}  // namespace nestrec

#endif  // NESTREC_PIPELINE_H_
