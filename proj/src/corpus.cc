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

#include "nestrec/corpus.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "nestrec/io.h"

namespace nestrec {

namespace {

constexpr std::array<std::string_view, kNumEntityTypes> kTypeNames = {
    "abstract", "animal", "event",  "object",    "organization",
    "person",   "place",  "plant",  "substance", "time",
};

bool ParseInt(std::string_view text, int *value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   *value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Matches "# key = value" comments; returns the value.
std::optional<std::string_view> CommentValue(std::string_view line,
                                             std::string_view key) {
  std::string_view body = line.substr(1);
  body = Trim(body);
  if (body.substr(0, key.size()) != key) return std::nullopt;
  std::string_view rest = Trim(body.substr(key.size()));
  if (rest.empty()) return std::string_view();
  if (rest.front() != '=') return std::nullopt;
  return Trim(rest.substr(1));
}

bool IsNewdoc(std::string_view line) {
  std::string_view body = Trim(line.substr(1));
  if (body.substr(0, 6) != "newdoc") return false;
  return body.size() == 6 || body[6] == ' ' || body[6] == '=';
}

std::string CorpusOfDocument(std::string_view doc_id,
                             std::string_view fallback) {
  size_t colon = doc_id.find(':');
  if (colon != std::string_view::npos && colon > 0) {
    return std::string(doc_id.substr(0, colon));
  }
  return std::string(fallback);
}

struct OpenMarker {
  EntityType type;
  int id;
  std::optional<std::string> identity;
  int start;
};

bool SpanOrder(const EntitySpan &a, const EntitySpan &b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end > b.end;
  return a.entity_id < b.entity_id;
}

void CheckNesting(std::span<const EntitySpan> spans) {
  for (size_t i = 0; i < spans.size(); ++i) {
    for (size_t j = i + 1; j < spans.size(); ++j) {
      const EntitySpan &a = spans[i];
      const EntitySpan &b = spans[j];
      if (Crosses(a.start, a.end, b.start, b.end)) {
        throw NestingError("entities " + std::to_string(a.entity_id) + " [" +
                           std::to_string(a.start) + "," +
                           std::to_string(a.end) + "] and " +
                           std::to_string(b.entity_id) + " [" +
                           std::to_string(b.start) + "," +
                           std::to_string(b.end) + "] cross");
      }
    }
  }
}

}  // namespace

std::string_view EntityTypeName(EntityType type) {
  return kTypeNames[static_cast<int>(type)];
}

std::optional<EntityType> ParseEntityType(std::string_view name) {
  for (int i = 0; i < kNumEntityTypes; ++i) {
    if (kTypeNames[i] == name) return static_cast<EntityType>(i);
  }
  return std::nullopt;
}

std::string_view PartitionName(Partition partition) {
  switch (partition) {
    case Partition::kTrain: return "train";
    case Partition::kDev: return "dev";
    case Partition::kTest: return "test";
    case Partition::kUnlabeled: return "unlabeled";
  }
  return "unlabeled";
}

// ---------------------------------------------------------------------------
// MiscMap

MiscMap MiscMap::Parse(std::string_view column) {
  MiscMap misc;
  if (column == "_" || column.empty()) return misc;
  for (std::string_view part : Split(column, '|')) {
    size_t eq = part.find('=');
    if (eq == std::string_view::npos) {
      misc.items_.push_back({std::string(part), "", false});
    } else {
      misc.items_.push_back({std::string(part.substr(0, eq)),
                             std::string(part.substr(eq + 1)), true});
    }
  }
  return misc;
}

std::string MiscMap::Serialize() const {
  if (items_.empty()) return "_";
  std::string out;
  for (size_t i = 0; i < items_.size(); ++i) {
    if (i > 0) out.push_back('|');
    out += items_[i].key;
    if (items_[i].has_value) {
      out.push_back('=');
      out += items_[i].value;
    }
  }
  return out;
}

const std::string *MiscMap::Find(std::string_view key) const {
  for (const Item &item : items_) {
    if (item.key == key) return &item.value;
  }
  return nullptr;
}

void MiscMap::Set(std::string_view key, std::string_view value) {
  for (Item &item : items_) {
    if (item.key == key) {
      item.value = std::string(value);
      item.has_value = true;
      return;
    }
  }
  items_.push_back({std::string(key), std::string(value), true});
}

void MiscMap::Erase(std::string_view key) {
  std::erase_if(items_, [&](const Item &item) { return item.key == key; });
}

// ---------------------------------------------------------------------------
// Basic accessors

bool Crosses(int start_a, int end_a, int start_b, int end_b) {
  bool overlap = start_a <= end_b && start_b <= end_a;
  if (!overlap) return false;
  bool a_in_b = start_b <= start_a && end_a <= end_b;
  bool b_in_a = start_a <= start_b && end_b <= end_a;
  return !a_in_b && !b_in_a;
}

bool Sentence::IsNamed(const EntitySpan &span) const {
  if (span.head < 1 || span.head > size()) return false;
  return token(span.head).upos == "PROPN";
}

std::string Sentence::Text(int start, int end) const {
  std::string text;
  for (int i = start; i <= end; ++i) {
    if (i > start) text.push_back(' ');
    text += token(i).form;
  }
  return text;
}

size_t Corpus::NumSentences() const {
  size_t n = 0;
  for (const Document &doc : documents) n += doc.sentences.size();
  return n;
}

size_t Corpus::NumTokens() const {
  size_t n = 0;
  for (const Document &doc : documents) {
    for (const Sentence &s : doc.sentences) n += s.tokens.size();
  }
  return n;
}

size_t Corpus::NumEntities() const {
  size_t n = 0;
  for (const Document &doc : documents) {
    for (const Sentence &s : doc.sentences) n += s.entities.size();
  }
  return n;
}

// ---------------------------------------------------------------------------
// Entity encoding

std::string EscapeIdentity(std::string_view identity) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : identity) {
    unsigned char u = static_cast<unsigned char>(c);
    if (c == ' ') {
      out.push_back('_');
    } else if (c == '%' || c == '(' || c == ')' || c == '|' || u < 0x20) {
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xF]);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeIdentity(std::string_view escaped) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '%' && i + 2 < escaped.size() &&
        hex(escaped[i + 1]) >= 0 && hex(escaped[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(escaped[i + 1]) * 16 +
                                      hex(escaped[i + 2])));
      i += 2;
    } else {
      out.push_back(escaped[i]);
    }
  }
  return out;
}

void SortSpans(std::vector<EntitySpan> &spans) {
  std::sort(spans.begin(), spans.end(), SpanOrder);
}

std::vector<EntitySpan> DecodeEntities(const Sentence &sentence) {
  std::vector<EntitySpan> spans;
  std::map<int, OpenMarker> open;
  auto fail = [&](int token, const std::string &msg) -> DecodeError {
    return DecodeError("sentence " + sentence.sent_id + " token " +
                       std::to_string(token) + ": " + msg);
  };
  auto close = [&](const OpenMarker &m, int end) {
    EntitySpan span;
    span.start = m.start;
    span.end = end;
    span.etype = m.type;
    span.entity_id = m.id;
    span.identity = m.identity;
    spans.push_back(std::move(span));
  };

  for (const Token &tok : sentence.tokens) {
    const std::string *value = tok.misc.Find(kEntityKey);
    if (value == nullptr) continue;
    std::string_view v = *value;
    size_t p = 0;
    if (v.empty()) throw fail(tok.index, "empty Entity value");
    while (p < v.size()) {
      if (v[p] == '(') {
        ++p;
        size_t dash = v.find('-', p);
        if (dash == std::string_view::npos) {
          throw fail(tok.index, "malformed open marker in '" +
                                    std::string(v) + "'");
        }
        std::string_view type_name = v.substr(p, dash - p);
        std::optional<EntityType> type = ParseEntityType(type_name);
        if (!type) {
          throw fail(tok.index,
                     "unknown entity type '" + std::string(type_name) + "'");
        }
        p = dash + 1;
        size_t digits = p;
        while (p < v.size() && IsDigit(v[p])) ++p;
        int id = 0;
        if (!ParseInt(v.substr(digits, p - digits), &id) || id <= 0) {
          throw fail(tok.index, "bad entity id in '" + std::string(v) + "'");
        }
        OpenMarker marker{*type, id, std::nullopt, tok.index};
        if (p < v.size() && v[p] == '-') {
          ++p;
          size_t begin = p;
          while (p < v.size() && v[p] != '(' && v[p] != ')') ++p;
          if (p == begin) throw fail(tok.index, "empty identity");
          marker.identity = UnescapeIdentity(v.substr(begin, p - begin));
        }
        if (open.count(id) > 0) {
          throw fail(tok.index,
                     "entity " + std::to_string(id) + " opened twice");
        }
        if (p < v.size() && v[p] == ')') {
          ++p;
          close(marker, tok.index);
        } else {
          open.emplace(id, std::move(marker));
        }
      } else if (IsDigit(v[p])) {
        size_t digits = p;
        while (p < v.size() && IsDigit(v[p])) ++p;
        int id = 0;
        ParseInt(v.substr(digits, p - digits), &id);
        if (p >= v.size() || v[p] != ')') {
          throw fail(tok.index,
                     "malformed close marker in '" + std::string(v) + "'");
        }
        ++p;
        auto it = open.find(id);
        if (it == open.end()) {
          throw fail(tok.index,
                     "unmatched close bracket for entity " +
                         std::to_string(id));
        }
        close(it->second, tok.index);
        open.erase(it);
      } else {
        throw fail(tok.index,
                   "unexpected character in '" + std::string(v) + "'");
      }
    }
  }
  if (!open.empty()) {
    const OpenMarker &m = open.begin()->second;
    throw fail(m.start, "unmatched open bracket for entity " +
                            std::to_string(m.id));
  }
  CheckNesting(spans);
  for (EntitySpan &span : spans) {
    span.head = SpanHead(sentence, span.start, span.end);
  }
  SortSpans(spans);
  return spans;
}

std::vector<std::string> EncodeEntities(std::span<const EntitySpan> spans,
                                        int num_tokens) {
  CheckNesting(spans);
  std::vector<std::string> values(static_cast<size_t>(num_tokens));
  std::vector<const EntitySpan *> ordered;
  for (const EntitySpan &span : spans) {
    if (span.start < 1 || span.end > num_tokens || span.start > span.end) {
      throw NestingError("entity " + std::to_string(span.entity_id) +
                         " lies outside the sentence");
    }
    ordered.push_back(&span);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const EntitySpan *a, const EntitySpan *b) {
              return SpanOrder(*a, *b);
            });

  for (int t = 1; t <= num_tokens; ++t) {
    std::string &out = values[t - 1];
    // Opens, outermost first; singletons are innermost so they come last.
    for (const EntitySpan *s : ordered) {
      if (s->start != t) continue;
      out += '(';
      out += EntityTypeName(s->etype);
      out += '-';
      out += std::to_string(s->entity_id);
      if (s->identity) {
        out += '-';
        out += EscapeIdentity(*s->identity);
      }
      if (s->end == t) out += ')';
    }
    // Closes, innermost first.
    for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) {
      const EntitySpan *s = *it;
      if (s->end != t || s->start == t) continue;
      out += std::to_string(s->entity_id);
      out += ')';
    }
  }
  return values;
}

// ---------------------------------------------------------------------------
// Trees

bool IsPunct(const Token &token) { return token.upos == "PUNCT"; }

int SpanHead(const Sentence &sentence, int start, int end) {
  if (start > end || start < 1 || end > sentence.size()) {
    throw std::invalid_argument("empty or out-of-range span [" +
                                std::to_string(start) + "," +
                                std::to_string(end) + "]");
  }
  int first_content = 0;
  for (int i = start; i <= end; ++i) {
    const Token &tok = sentence.token(i);
    if (IsPunct(tok)) continue;
    if (first_content == 0) first_content = i;
    if (tok.head == 0 || tok.head < start || tok.head > end) return i;
  }
  return first_content != 0 ? first_content : start;
}

std::optional<std::string> CheckTree(const Sentence &sentence) {
  const int n = sentence.size();
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    const Token &tok = sentence.token(i);
    if (tok.index != i) {
      return "token index " + std::to_string(tok.index) + " at position " +
             std::to_string(i);
    }
    if (tok.head < 0 || tok.head > n) {
      return "head " + std::to_string(tok.head) + " of token " +
             std::to_string(i) + " out of range";
    }
    if (tok.head == i) return "token " + std::to_string(i) + " heads itself";
    if (tok.head == 0) ++roots;
  }
  if (n > 0 && roots != 1) {
    return std::to_string(roots) + " root tokens";
  }
  // Each walk towards the root must finish within n steps.
  std::vector<int> state(static_cast<size_t>(n) + 1, 0);  // 2 = reaches root
  for (int i = 1; i <= n; ++i) {
    std::vector<int> path;
    int cur = i;
    while (cur != 0 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = sentence.token(cur).head;
    }
    if (cur != 0 && state[cur] == 1) {
      return "cycle through token " + std::to_string(cur);
    }
    for (int p : path) state[p] = 2;
  }
  return std::nullopt;
}

TreeInfo AnalyzeTree(const Sentence &sentence) {
  const int n = sentence.size();
  TreeInfo info;
  info.depth.assign(n + 1, 0);
  info.subtree_size.assign(n + 1, 1);
  info.leftmost.resize(n + 1);
  info.rightmost.resize(n + 1);
  info.children.assign(n + 1, {});
  for (int i = 1; i <= n; ++i) {
    info.leftmost[i] = info.rightmost[i] = i;
    int h = sentence.token(i).head;
    if (h > 0) info.children[h].push_back(i);
  }
  // Breadth-first from the root gives a top-down order.
  std::vector<int> order;
  order.reserve(n);
  for (int i = 1; i <= n; ++i) {
    if (sentence.token(i).head == 0) order.push_back(i);
  }
  for (size_t k = 0; k < order.size(); ++k) {
    int node = order[k];
    for (int child : info.children[node]) {
      info.depth[child] = info.depth[node] + 1;
      order.push_back(child);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int node = *it;
    int h = sentence.token(node).head;
    if (h == 0) continue;
    info.subtree_size[h] += info.subtree_size[node];
    info.leftmost[h] = std::min(info.leftmost[h], info.leftmost[node]);
    info.rightmost[h] = std::max(info.rightmost[h], info.rightmost[node]);
  }
  return info;
}

// ---------------------------------------------------------------------------
// CoNLL-U

Corpus ParseConllu(std::string_view text, const ParseOptions &options) {
  Corpus corpus;
  corpus.corpus_id = options.corpus_id;
  corpus.partition = options.partition;

  Sentence current;
  std::vector<std::string> pending_opaque;
  int sentence_first_line = 0;
  bool in_sentence = false;

  auto flush = [&]() {
    if (!in_sentence) return;
    if (current.tokens.empty()) {
      throw ParseError(sentence_first_line, "sentence without tokens");
    }
    current.trailing_lines = std::move(pending_opaque);
    pending_opaque.clear();
    std::optional<std::string> newdoc;
    for (const std::string &c : current.comments) {
      if (IsNewdoc(c)) {
        newdoc = std::string(CommentValue(c, "newdoc id").value_or(""));
      }
      if (auto id = CommentValue(c, "sent_id")) {
        current.sent_id = std::string(*id);
      }
    }
    if (current.sent_id.empty()) {
      current.sent_id = std::to_string(corpus.NumSentences() + 1);
    }
    if (auto defect = CheckTree(current)) {
      throw ValidationError("line " + std::to_string(sentence_first_line) +
                            ": sentence " + current.sent_id + ": " + *defect);
    }
    if (newdoc || corpus.documents.empty()) {
      Document doc;
      doc.doc_id = newdoc && !newdoc->empty()
                       ? *newdoc
                       : "doc" + std::to_string(corpus.documents.size() + 1);
      doc.corpus_id = CorpusOfDocument(doc.doc_id, options.corpus_id);
      corpus.documents.push_back(std::move(doc));
    }
    for (const std::string &c : current.comments) {
      if (auto value = CommentValue(c, "meta::corpus")) {
        corpus.documents.back().corpus_id = std::string(*value);
      }
    }
    try {
      current.entities = DecodeEntities(current);
    } catch (const Error &e) {
      std::string where = "line " + std::to_string(sentence_first_line) + ": ";
      if (dynamic_cast<const NestingError *>(&e)) {
        throw NestingError(where + e.what());
      }
      throw DecodeError(where + e.what());
    }
    corpus.documents.back().sentences.push_back(std::move(current));
    current = Sentence();
    in_sentence = false;
  };

  std::vector<std::string_view> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    if (!in_sentence) {
      in_sentence = true;
      sentence_first_line = line_no;
    }
    if (line.front() == '#') {
      if (!current.tokens.empty() || !pending_opaque.empty()) {
        throw ParseError(line_no, "comment inside sentence body");
      }
      current.comments.emplace_back(line);
      continue;
    }
    std::vector<std::string_view> cols = Split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      pending_opaque.emplace_back(line);
      continue;
    }
    Token tok;
    if (!ParseInt(id, &tok.index)) {
      throw ParseError(line_no, "bad token id '" + std::string(id) + "'");
    }
    if (tok.index != current.size() + 1) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": token index " + std::to_string(tok.index) +
                            " breaks the 1..n sequence");
    }
    tok.form = std::string(cols[1]);
    tok.lemma = std::string(cols[2]);
    tok.upos = std::string(cols[3]);
    tok.xpos = std::string(cols[4]);
    tok.feats = std::string(cols[5]);
    if (!ParseInt(cols[6], &tok.head)) {
      throw ParseError(line_no, "bad head '" + std::string(cols[6]) + "'");
    }
    tok.deprel = std::string(cols[7]);
    tok.deps = std::string(cols[8]);
    tok.misc = MiscMap::Parse(cols[9]);
    tok.opaque_lines = std::move(pending_opaque);
    pending_opaque.clear();
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return corpus;
}

Corpus ReadConlluFile(const std::string &path, const ParseOptions &options) {
  return ParseConllu(ReadFile(path), options);
}

std::string SerializeConllu(const Corpus &corpus) {
  std::string out;
  for (const Document &doc : corpus.documents) {
    for (const Sentence &s : doc.sentences) {
      std::vector<std::string> entity_values =
          EncodeEntities(s.entities, s.size());
      for (const std::string &c : s.comments) {
        out += c;
        out += '\n';
      }
      for (const Token &tok : s.tokens) {
        for (const std::string &line : tok.opaque_lines) {
          out += line;
          out += '\n';
        }
        MiscMap misc = tok.misc;
        const std::string &ev = entity_values[tok.index - 1];
        if (ev.empty()) {
          misc.Erase(kEntityKey);
        } else {
          misc.Set(kEntityKey, ev);
        }
        out += std::to_string(tok.index);
        for (const std::string *col :
             {&tok.form, &tok.lemma, &tok.upos, &tok.xpos, &tok.feats}) {
          out += '\t';
          out += *col;
        }
        out += '\t';
        out += std::to_string(tok.head);
        out += '\t';
        out += tok.deprel;
        out += '\t';
        out += tok.deps;
        out += '\t';
        out += misc.Serialize();
        out += '\n';
      }
      for (const std::string &line : s.trailing_lines) {
        out += line;
        out += '\n';
      }
      out += '\n';
    }
  }
  return out;
}

void ClearEntities(Corpus &corpus) {
  for (Document &doc : corpus.documents) {
    for (Sentence &s : doc.sentences) s.entities.clear();
  }
}

void OverlayTrees(Corpus &corpus, const Corpus &trees) {
  if (corpus.documents.size() != trees.documents.size()) {
    throw ValidationError("tree file has " +
                          std::to_string(trees.documents.size()) +
                          " documents, expected " +
                          std::to_string(corpus.documents.size()));
  }
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    Document &doc = corpus.documents[d];
    const Document &tdoc = trees.documents[d];
    if (doc.sentences.size() != tdoc.sentences.size()) {
      throw ValidationError("tree file sentence count differs in document " +
                            doc.doc_id);
    }
    for (size_t i = 0; i < doc.sentences.size(); ++i) {
      Sentence &s = doc.sentences[i];
      const Sentence &ts = tdoc.sentences[i];
      if (s.size() != ts.size()) {
        throw ValidationError("tree file token count differs in sentence " +
                              s.sent_id);
      }
      for (int t = 1; t <= s.size(); ++t) {
        s.token(t).upos = ts.token(t).upos;
        s.token(t).head = ts.token(t).head;
        s.token(t).deprel = ts.token(t).deprel;
      }
      for (EntitySpan &span : s.entities) {
        span.head = SpanHead(s, span.start, span.end);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Validation

std::string Violation::ToString() const {
  return doc_id + "\t" + sent_id + "\t" + rule + "\t" + detail;
}

std::vector<Violation> ValidateCorpus(const Corpus &corpus) {
  std::vector<Violation> out;
  std::unordered_set<std::string> doc_ids;
  for (const Document &doc : corpus.documents) {
    auto add = [&](const std::string &sent, const char *rule,
                   std::string detail) {
      out.push_back({doc.doc_id, sent, rule, std::move(detail)});
    };
    if (doc.doc_id.empty()) add("", "doc_id_empty", "document without id");
    if (!doc_ids.insert(doc.doc_id).second) {
      add("", "doc_id_duplicate", "document id repeated in corpus");
    }
    std::unordered_set<std::string> sent_ids;
    std::unordered_set<int> entity_ids;
    for (const Sentence &s : doc.sentences) {
      if (!sent_ids.insert(s.sent_id).second) {
        add(s.sent_id, "sent_id_duplicate", "sentence id repeated");
      }
      bool tree_ok = true;
      if (auto defect = CheckTree(s)) {
        add(s.sent_id, "tree", *defect);
        tree_ok = false;
      }
      for (size_t i = 0; i < s.entities.size(); ++i) {
        const EntitySpan &e = s.entities[i];
        std::string name = "entity " + std::to_string(e.entity_id);
        if (e.entity_id <= 0) {
          add(s.sent_id, "entity_id", name + " is not positive");
        } else if (!entity_ids.insert(e.entity_id).second) {
          add(s.sent_id, "entity_id", name + " repeated in document");
        }
        if (e.start < 1 || e.end > s.size() || e.start > e.end) {
          add(s.sent_id, "span_range",
              name + " [" + std::to_string(e.start) + "," +
                  std::to_string(e.end) + "] outside sentence");
          continue;
        }
        if (e.head < e.start || e.head > e.end) {
          add(s.sent_id, "span_head",
              name + " head " + std::to_string(e.head) + " outside span");
        } else if (e.identity && tree_ok && !s.IsNamed(e)) {
          add(s.sent_id, "identity_unnamed",
              name + " has an identity but no proper-noun head");
        }
        for (size_t j = i + 1; j < s.entities.size(); ++j) {
          const EntitySpan &f = s.entities[j];
          if (Crosses(e.start, e.end, f.start, f.end)) {
            add(s.sent_id, "crossing",
                name + " crosses entity " + std::to_string(f.entity_id));
          }
        }
      }
    }
  }
  return out;
}

}  // namespace nestrec
