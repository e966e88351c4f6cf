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

#include "nestrec/distant.h"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace nestrec {

using ojson = nlohmann::ordered_json;

namespace {

ojson TreeToJson(const TreeMapNode &node) {
  ojson j;
  j["label"] = node.label;
  j["count"] = node.count;
  j["children"] = ojson::array();
  for (const TreeMapNode &c : node.children) {
    j["children"].push_back(TreeToJson(c));
  }
  return j;
}

}  // namespace

std::string TermNetwork::ToJson() const {
  ojson j;
  j["focus"] = focus;
  j["nodes"] = ojson::array();
  for (const auto &[word, count] : nodes) {
    j["nodes"].push_back({{"word", word}, {"count", count}});
  }
  j["edges"] = ojson::array();
  for (const auto &[pair, count] : edges) {
    j["edges"].push_back(
        {{"from", pair.first}, {"to", pair.second}, {"count", count}});
  }
  return j.dump(2) + "\n";
}

TermNetwork BuildTermNetwork(const Corpus &corpus, std::string_view lemma) {
  TermNetwork net;
  net.focus = std::string(lemma);
  for (const Document &doc : corpus.documents) {
    for (const Sentence &s : doc.sentences) {
      for (const EntitySpan &e : s.entities) {
        if (s.token(e.head).lemma != lemma) continue;
        ++net.spans;
        for (int i = e.start; i <= e.end; ++i) {
          ++net.nodes[s.token(i).form];
          if (i < e.end) {
            ++net.edges[{s.token(i).form, s.token(i + 1).form}];
          }
        }
      }
    }
  }
  return net;
}

std::string TreeMapNode::ToJson() const { return TreeToJson(*this).dump(2) + "\n"; }

TreeMapNode BuildTreeMap(const Corpus &corpus) {
  // named -> type -> lemma -> count
  std::map<bool, std::map<EntityType, std::map<std::string, int>>> counts;
  for (const Document &doc : corpus.documents) {
    for (const Sentence &s : doc.sentences) {
      for (const EntitySpan &e : s.entities) {
        ++counts[s.IsNamed(e)][e.etype][s.token(e.head).lemma];
      }
    }
  }
  TreeMapNode root{"entities", 0, {}};
  for (bool named : {true, false}) {
    auto it = counts.find(named);
    if (it == counts.end()) continue;
    TreeMapNode group{named ? "named" : "non-named", 0, {}};
    for (const auto &[type, lemmas] : it->second) {
      TreeMapNode type_node{std::string(EntityTypeName(type)), 0, {}};
      for (const auto &[lemma, count] : lemmas) {
        type_node.children.push_back({lemma, count, {}});
        type_node.count += count;
      }
      std::stable_sort(type_node.children.begin(), type_node.children.end(),
                       [](const TreeMapNode &a, const TreeMapNode &b) {
                         return a.count > b.count;
                       });
      group.count += type_node.count;
      group.children.push_back(std::move(type_node));
    }
    root.count += group.count;
    root.children.push_back(std::move(group));
  }
  return root;
}

double TypeProportions::Percent(EntityType type) const {
  auto it = counts.find(type);
  if (total == 0 || it == counts.end()) return 0.0;
  return 100.0 * it->second / total;
}

std::optional<double> TypeProportions::PersonAbstractRatio() const {
  auto abstract = counts.find(EntityType::kAbstract);
  if (abstract == counts.end() || abstract->second == 0) return std::nullopt;
  auto person = counts.find(EntityType::kPerson);
  int p = person == counts.end() ? 0 : person->second;
  return static_cast<double>(p) / abstract->second;
}

std::vector<TypeProportions> BuildTypeProportions(const Corpus &corpus,
                                                  ProportionGroup group) {
  std::vector<TypeProportions> out;
  std::map<std::string, size_t> index;
  for (const Document &doc : corpus.documents) {
    const std::string &key =
        group == ProportionGroup::kDocument ? doc.doc_id : doc.corpus_id;
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) out.push_back({key, {}, 0});
    TypeProportions &t = out[it->second];
    for (const Sentence &s : doc.sentences) {
      for (const EntitySpan &e : s.entities) {
        ++t.counts[e.etype];
        ++t.total;
      }
    }
  }
  return out;
}

std::string ProportionsToTsv(const std::vector<TypeProportions> &groups) {
  std::string out = "group\ttype\tcount\tpercent\n";
  char buf[64];
  for (const TypeProportions &g : groups) {
    for (const auto &[type, count] : g.counts) {
      std::snprintf(buf, sizeof(buf), "%.2f", g.Percent(type));
      out += g.group + "\t" + std::string(EntityTypeName(type)) + "\t" +
             std::to_string(count) + "\t" + buf + "\n";
    }
    std::optional<double> ratio = g.PersonAbstractRatio();
    if (ratio) {
      std::snprintf(buf, sizeof(buf), "%.3f", *ratio);
    } else {
      std::snprintf(buf, sizeof(buf), "n/a");
    }
    out += g.group + "\tperson/abstract\t\t" + buf + "\n";
  }
  return out;
}

}  // namespace nestrec
