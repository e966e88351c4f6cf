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

// Corpus-level aggregations of entity annotations for visualization tools.

#ifndef NESTREC_DISTANT_H_
#define NESTREC_DISTANT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nestrec/corpus.h"

namespace nestrec {

// Word and adjacent-word-pair frequencies inside spans headed by `focus`.
struct TermNetwork {
  std::string focus;
  std::map<std::string, int> nodes;
  std::map<std::pair<std::string, std::string>, int> edges;
  int spans = 0;

  // {focus, nodes:[{word,count}], edges:[{from,to,count}]}
  std::string ToJson() const;
};

TermNetwork BuildTermNetwork(const Corpus &corpus, std::string_view lemma);

// root -> named | non-named -> entity type -> head lemma.
struct TreeMapNode {
  std::string label;
  int count = 0;
  std::vector<TreeMapNode> children;

  std::string ToJson() const;
};

TreeMapNode BuildTreeMap(const Corpus &corpus);

enum class ProportionGroup { kDocument, kCorpus };

struct TypeProportions {
  std::string group;  // doc id or corpus id
  std::map<EntityType, int> counts;
  int total = 0;

  double Percent(EntityType type) const;
  // person / abstract; nullopt when there are no abstract mentions.
  std::optional<double> PersonAbstractRatio() const;
};

std::vector<TypeProportions> BuildTypeProportions(const Corpus &corpus,
                                                  ProportionGroup group);

// `group<TAB>type<TAB>count<TAB>percent` rows per attested type, then a
// `group<TAB>person/abstract<TAB><TAB>ratio|n/a` row per group.
std::string ProportionsToTsv(const std::vector<TypeProportions> &groups);

}  // namespace nestrec

#endif  // NESTREC_DISTANT_H_
