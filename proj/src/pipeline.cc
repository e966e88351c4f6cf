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

#include "nestrec/pipeline.h"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace nestrec {

namespace {

std::vector<Sentence *> AllSentences(Corpus &corpus) {
  std::vector<Sentence *> out;
  for (Document &d : corpus.documents) {
    for (Sentence &s : d.sentences) out.push_back(&s);
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void ParallelFor(size_t n, int threads, Fn fn) {
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(std::max<size_t>(n, 1)));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread &t : pool) t.join();
}

std::vector<MentionCandidate> CandidatesOf(const Sentence &s) {
  std::vector<EntitySpan> spans = s.entities;
  SortSpans(spans);
  std::vector<MentionCandidate> out;
  for (const EntitySpan &e : spans) {
    out.push_back({e.start, e.end, e.head, MentionSource::kParse});
  }
  return out;
}

}  // namespace

std::optional<DetectMethod> ParseDetectMethod(std::string_view name) {
  if (name == "noun") return DetectMethod::kNoun;
  if (name == "lookup") return DetectMethod::kLookup;
  if (name == "parse") return DetectMethod::kParse;
  return std::nullopt;
}

std::string_view DetectMethodName(DetectMethod method) {
  switch (method) {
    case DetectMethod::kNoun: return "noun";
    case DetectMethod::kLookup: return "lookup";
    case DetectMethod::kParse: return "parse";
  }
  return "parse";
}

std::optional<ClassifyMethod> ParseClassifyMethod(std::string_view name) {
  if (name == "majority") return ClassifyMethod::kMajority;
  if (name == "kb") return ClassifyMethod::kKb;
  if (name == "crf") return ClassifyMethod::kCrf;
  if (name == "crf+kb" || name == "hybrid") return ClassifyMethod::kHybrid;
  return std::nullopt;
}

std::string_view ClassifyMethodName(ClassifyMethod method) {
  switch (method) {
    case ClassifyMethod::kMajority: return "majority";
    case ClassifyMethod::kKb: return "kb";
    case ClassifyMethod::kCrf: return "crf";
    case ClassifyMethod::kHybrid: return "crf+kb";
  }
  return "crf+kb";
}

std::optional<LinkMethod> ParseLinkMethod(std::string_view name) {
  if (name == "exact") return LinkMethod::kExact;
  if (name == "head") return LinkMethod::kHead;
  if (name == "cascade") return LinkMethod::kCascade;
  return std::nullopt;
}

std::string_view LinkMethodName(LinkMethod method) {
  switch (method) {
    case LinkMethod::kExact: return "exact";
    case LinkMethod::kHead: return "head";
    case LinkMethod::kCascade: return "cascade";
  }
  return "cascade";
}

void AssignEntityIds(Corpus &corpus) {
  for (Document &doc : corpus.documents) {
    int next = 1;
    for (Sentence &s : doc.sentences) {
      SortSpans(s.entities);
      for (EntitySpan &e : s.entities) e.entity_id = next++;
    }
  }
}

Corpus DetectCorpus(const Corpus &input, DetectMethod method,
                    const LookupInventory *inventory,
                    const MentionOptions &options) {
  if (method == DetectMethod::kLookup && inventory == nullptr) {
    throw std::invalid_argument("lookup detection needs an inventory");
  }
  Corpus out = input;
  for (Sentence *s : AllSentences(out)) {
    std::vector<MentionCandidate> cands;
    switch (method) {
      case DetectMethod::kNoun: cands = DetectNoun(*s, options); break;
      case DetectMethod::kLookup: cands = DetectLookup(*s, *inventory); break;
      case DetectMethod::kParse: cands = DetectParse(*s, options); break;
    }
    s->entities.clear();
    for (const MentionCandidate &c : cands) {
      EntitySpan e;
      e.start = c.start;
      e.end = c.end;
      e.head = c.head;
      e.etype = EntityType::kAbstract;
      s->entities.push_back(e);
    }
  }
  AssignEntityIds(out);
  return out;
}

std::vector<LabeledSequence> CrfTrainingData(const Corpus &train) {
  std::vector<LabeledSequence> data;
  for (const Document &doc : train.documents) {
    for (const Sentence &s : doc.sentences) {
      if (s.tokens.empty()) continue;
      data.push_back({ExtractSentenceFeatures(s), GoldLabels(s)});
    }
  }
  return data;
}

Corpus ClassifyCorpus(const Corpus &mentions, ClassifyMethod method,
                      const ClassifyResources &res) {
  const bool needs_kb =
      method == ClassifyMethod::kKb || method == ClassifyMethod::kHybrid;
  const bool needs_crf =
      method == ClassifyMethod::kCrf || method == ClassifyMethod::kHybrid;
  if (needs_kb && res.kb == nullptr) {
    throw std::invalid_argument("classification method needs a KB");
  }
  if (needs_crf && res.crf == nullptr) {
    throw std::invalid_argument("classification method needs a CRF model");
  }
  Corpus out = mentions;
  std::vector<Sentence *> sentences = AllSentences(out);
  ParallelFor(sentences.size(), needs_crf ? res.threads : 1, [&](size_t i) {
    Sentence &s = *sentences[i];
    std::vector<MentionCandidate> cands = CandidatesOf(s);
    switch (method) {
      case ClassifyMethod::kMajority:
        s.entities = ClassifyMajority(cands);
        break;
      case ClassifyMethod::kKb:
        s.entities = ClassifyKbOnly(s, cands, *res.kb);
        break;
      case ClassifyMethod::kCrf:
      case ClassifyMethod::kHybrid: {
        if (cands.empty()) {
          s.entities.clear();
          break;
        }
        ScoreTable marg = res.crf->Marginals(ExtractSentenceFeatures(s));
        s.entities = method == ClassifyMethod::kCrf
                         ? ClassifyCrf(s, cands, marg, res.hybrid)
                         : ClassifyHybrid(s, cands, *res.kb, marg, res.hybrid);
        break;
      }
    }
  });
  AssignEntityIds(out);
  return out;
}

std::vector<std::optional<std::string>> PredictLinks(
    std::span<const LinkMention> mentions, const LinkTable &table,
    LinkMethod method) {
  std::vector<std::optional<std::string>> out;
  for (const LinkMention &m : mentions) {
    switch (method) {
      case LinkMethod::kExact:
        out.push_back(LinkExactBaseline(m, table));
        break;
      case LinkMethod::kHead:
        out.push_back(LinkHeadBaseline(m, table));
        break;
      case LinkMethod::kCascade: {
        std::optional<LinkSuggestion> s = LinkCascade(m, table);
        out.push_back(s ? std::optional(s->article) : std::nullopt);
        break;
      }
    }
  }
  return out;
}

std::vector<double> MentionRow(const Corpus &gold, const Corpus &pred) {
  Prf exact = CorpusPrf(gold, pred, MatchMode::kExact, false);
  Prf fuzzy = CorpusPrf(gold, pred, MatchMode::kFuzzy, false);
  return {exact.recall, exact.precision, exact.f1,
          fuzzy.recall, fuzzy.precision, fuzzy.f1};
}

std::vector<double> ClassificationRow(const Corpus &gold, const Corpus &pred) {
  Prf span = CorpusPrf(gold, pred, MatchMode::kExact, true);
  Prf head = CorpusPrf(gold, pred, MatchMode::kFuzzy, true);
  return {span.recall, span.precision, span.f1,
          head.recall, head.precision, head.f1};
}

std::vector<double> LinkingRow(const LinkScores &scores) {
  return {scores.accuracy, scores.coverage, scores.no_err};
}

}  // namespace nestrec
