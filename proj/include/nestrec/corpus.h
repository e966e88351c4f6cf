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

// Shared domain types for dependency-parsed corpora with nested entity
// annotations, plus CoNLL-U reading and writing.

#ifndef NESTREC_CORPUS_H_
#define NESTREC_CORPUS_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nestrec/errors.h"

namespace nestrec {

// The ten entity categories, in alphabetical order of their string forms.
enum class EntityType {
  kAbstract,
  kAnimal,
  kEvent,
  kObject,
  kOrganization,
  kPerson,
  kPlace,
  kPlant,
  kSubstance,
  kTime,
};

inline constexpr int kNumEntityTypes = 10;

inline constexpr std::array<EntityType, kNumEntityTypes> kAllEntityTypes = {
    EntityType::kAbstract,     EntityType::kAnimal, EntityType::kEvent,
    EntityType::kObject,       EntityType::kOrganization,
    EntityType::kPerson,       EntityType::kPlace,  EntityType::kPlant,
    EntityType::kSubstance,    EntityType::kTime,
};

std::string_view EntityTypeName(EntityType type);

// Returns nullopt for anything but the ten lowercase names.
std::optional<EntityType> ParseEntityType(std::string_view name);

// Ordered key/value pairs of the MISC column. Items without '=' keep an
// empty value and are written back without '='.
class MiscMap {
 public:
  struct Item {
    std::string key;
    std::string value;
    bool has_value = true;
  };

  MiscMap() = default;

  // Parses a MISC column; "_" is the empty map.
  static MiscMap Parse(std::string_view column);
  std::string Serialize() const;

  const std::string *Find(std::string_view key) const;
  // Replaces the value in place, or appends a new item.
  void Set(std::string_view key, std::string_view value);
  void Erase(std::string_view key);

  const std::vector<Item> &items() const { return items_; }
  bool empty() const { return items_.empty(); }

  bool operator==(const MiscMap &other) const = default;

 private:
  std::vector<Item> items_;
};

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos = "_";
  std::string feats = "_";
  int head = 0;  // 0 = root
  std::string deprel;
  std::string deps = "_";
  MiscMap misc;
  // Multiword-token range lines and empty nodes that precede this token,
  // kept verbatim.
  std::vector<std::string> opaque_lines;
};

struct EntitySpan {
  int start = 0;  // inclusive token indices
  int end = 0;
  EntityType etype = EntityType::kAbstract;
  int head = 0;
  int entity_id = 0;
  std::optional<std::string> identity;

  int length() const { return end - start + 1; }
  bool Contains(const EntitySpan &other) const {
    return start <= other.start && other.end <= end;
  }
  bool Covers(int token) const { return start <= token && token <= end; }

  bool operator==(const EntitySpan &other) const = default;
};

// True when the two ranges overlap without either containing the other.
bool Crosses(int start_a, int end_a, int start_b, int end_b);

struct Sentence {
  std::string sent_id;
  // All comment lines, verbatim and in order (including sent_id/newdoc).
  std::vector<std::string> comments;
  std::vector<Token> tokens;
  std::vector<EntitySpan> entities;
  // Opaque lines after the last token.
  std::vector<std::string> trailing_lines;

  int size() const { return static_cast<int>(tokens.size()); }
  const Token &token(int index) const { return tokens[index - 1]; }
  Token &token(int index) { return tokens[index - 1]; }

  // A span is named iff its head token is a proper noun.
  bool IsNamed(const EntitySpan &span) const;
  // Space-joined token forms of [start, end].
  std::string Text(int start, int end) const;
};

struct Document {
  std::string doc_id;
  std::string corpus_id;
  std::vector<Sentence> sentences;
};

enum class Partition { kTrain, kDev, kTest, kUnlabeled };

std::string_view PartitionName(Partition partition);

struct Corpus {
  std::string corpus_id;
  Partition partition = Partition::kUnlabeled;
  std::vector<Document> documents;

  size_t NumSentences() const;
  size_t NumTokens() const;
  size_t NumEntities() const;
};

// ---------------------------------------------------------------------------
// Entity encoding in the MISC "Entity" attribute.

inline constexpr std::string_view kEntityKey = "Entity";

// Decodes entity spans from the per-token Entity values of a sentence.
// Heads are computed with SpanHead. Throws DecodeError for unmatched or
// malformed markers and NestingError for crossing spans.
std::vector<EntitySpan> DecodeEntities(const Sentence &sentence);

// Per-token Entity values (index 0 is token 1); empty string means no key.
// Throws NestingError for crossing spans.
std::vector<std::string> EncodeEntities(std::span<const EntitySpan> spans,
                                        int num_tokens);

// Escapes an article identifier for use inside an open marker: spaces
// become '_', and characters that would break the marker grammar are
// percent-encoded.
std::string EscapeIdentity(std::string_view identity);
std::string UnescapeIdentity(std::string_view escaped);

// Orders spans outermost-first: by start, then longer first, then id.
void SortSpans(std::vector<EntitySpan> &spans);

// ---------------------------------------------------------------------------
// Dependency tree helpers.

// Leftmost non-punctuation token in [start, end] whose head lies outside
// the range (or is the root); else the leftmost non-punctuation token; else
// start. Throws std::invalid_argument on an empty or out-of-range span.
int SpanHead(const Sentence &sentence, int start, int end);

bool IsPunct(const Token &token);

// Returns a description of the first tree defect, or nullopt if the heads
// form a single-rooted tree over 1..n.
std::optional<std::string> CheckTree(const Sentence &sentence);

// Per-token (1-based, index 0 unused) subtree statistics. Requires a valid
// tree.
struct TreeInfo {
  std::vector<int> depth;          // root token = 0
  std::vector<int> subtree_size;   // includes the token itself
  std::vector<int> leftmost;       // smallest index in subtree
  std::vector<int> rightmost;      // largest index in subtree
  std::vector<std::vector<int>> children;
};

TreeInfo AnalyzeTree(const Sentence &sentence);

// ---------------------------------------------------------------------------
// CoNLL-U.

struct ParseOptions {
  std::string corpus_id;
  Partition partition = Partition::kUnlabeled;
};

// Throws ParseError (with line number), ValidationError (heads), or the
// decode errors of DecodeEntities.
Corpus ParseConllu(std::string_view text, const ParseOptions &options = {});
Corpus ReadConlluFile(const std::string &path,
                      const ParseOptions &options = {});

// Writes the corpus back out, re-encoding entity spans into MISC.
std::string SerializeConllu(const Corpus &corpus);

void ClearEntities(Corpus &corpus);

// Copies UPOS, HEAD and DEPREL from `trees` into `corpus`. Both must have
// identical sentence and token inventories; throws ValidationError
// otherwise.
void OverlayTrees(Corpus &corpus, const Corpus &trees);

// ---------------------------------------------------------------------------
// Validation.

struct Violation {
  std::string doc_id;
  std::string sent_id;
  std::string rule;
  std::string detail;

  std::string ToString() const;
};

std::vector<Violation> ValidateCorpus(const Corpus &corpus);

}  // namespace nestrec

#endif  // NESTREC_CORPUS_H_
