// Copyright 2026 The vecevent Authors.
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

#ifndef VECEVENT_CORPUS_H_
#define VECEVENT_CORPUS_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "vecevent/schema.h"

namespace vecevent::corpus {

// Half-open interval of byte offsets into a document's UTF-8 text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool Contains(const Span &other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool Overlaps(const Span &other) const {
    return begin < other.end && other.begin < end;
  }
  friend bool operator==(const Span &, const Span &) = default;
};

struct Token {
  std::string text;
  Span span;
  std::size_t index = 0;
};

struct Sentence {
  std::string id;
  Span span;
  std::vector<Token> tokens;
  // Indices into the owning document's entity list, in text order.
  std::vector<std::size_t> entities;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<Sentence> sentences;
};

inline constexpr std::size_t kNoSentence = static_cast<std::size_t>(-1);

struct Entity {
  std::string id;
  // Entity type from the annotation file (e.g. Protein, Habitat).
  std::string label;
  // Covering hull of all fragments.
  Span span;
  std::size_t sentence = kNoSentence;
  // Inclusive token range within the sentence.
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  // Set when the span starts or ends inside a token.
  bool partial_token = false;
  // Argument roles this entity fills in gold events of the task.
  std::set<std::string> arguments;
};

struct Event {
  std::string id;
  std::string type;
  std::string source;
  std::string target;
  // Source and target lie in different sentences. Such events stay in the
  // corpus but are left out of training and candidate generation.
  bool cross_sentence = false;

  friend bool operator==(const Event &, const Event &) = default;
};

struct ParseReport {
  std::size_t ignored_entities = 0;
  std::size_t skipped_events = 0;
  std::size_t skipped_lines = 0;
  std::size_t partial_tokens = 0;
  std::size_t cross_sentence_events = 0;
};

class AnnotatedDocument {
 public:
  Document document;
  std::vector<Entity> entities;
  std::vector<Event> events;
  ParseReport report;

  const Entity *FindEntity(std::string_view id) const;
  std::size_t EntityIndex(std::string_view id) const;
  void RebuildIndex();

 private:
  std::unordered_map<std::string, std::size_t> entity_index_;
};

struct Corpus {
  TaskSchema schema;
  std::vector<AnnotatedDocument> documents;
};

// Splits whitespace-separated runs further at letter/digit <-> punctuation
// boundaries. Inside an alphanumeric run '-', '_', '.' and '(' stay attached
// when followed by a letter or digit, and ')' stays attached when it closes
// a '(' of the same token. Bytes >= 0x80 count as letters. Offsets are
// relative to `text`.
std::vector<Token> Tokenize(std::string_view text);

// Sentence boundaries fall after '.', '!' or '?' followed by whitespace and
// an uppercase letter or digit, and at newlines. No boundary is placed
// strictly inside a guard span. Returned spans are whitespace-trimmed and
// non-empty.
std::vector<Span> SplitSentences(std::string_view text,
                                 const std::vector<Span> &guards = {});

// Fills token range, partial flag and sentence index for every entity whose
// span lies in `sentence`. Throws kAlignment if an entity overlaps the
// sentence without being contained in it, or covers no token.
void AlignEntities(const Sentence &sentence, std::size_t sentence_index,
                   std::vector<Entity *> entities);

// Byte offset of every code point index, plus a final entry for the end.
std::vector<std::size_t> CodepointOffsets(std::string_view text);

// Parses one document in the shared-task standoff layout:
//   entity lines  "Tn<TAB>Label Start End[;Start End...]<TAB>Surface"
//   event lines   "Rn<TAB>Type Role1:Tx Role2:Ty" or "En<TAB>Type[:Trigger] ..."
// T lines may appear in either file. Lines starting with '*', 'N', 'A', 'M'
// or '#' are skipped. Offsets count Unicode code points. Events of types
// unknown to the schema, and events touching ignored entity types, are
// skipped and counted.
AnnotatedDocument ParseStandoff(const std::string &doc_id,
                                const std::string &text,
                                std::string_view entity_lines,
                                std::string_view event_lines,
                                const TaskSchema &schema,
                                const std::string &entity_source = "entities",
                                const std::string &event_source = "events");

// Emits "Rn<TAB>Type SourceRole:Tx TargetRole:Ty" lines numbered from 1.
std::string WriteStandoff(const std::vector<Event> &events,
                          const TaskSchema &schema);

// Reads every <id>.txt in the directories with optional <id>.a1 / <id>.a2.
Corpus LoadCorpus(const std::vector<std::string> &directories,
                  const TaskSchema &schema, int jobs = 1);

// Counts per event type, argument role and entity type, laid out like the
// task statistics tables.
nlohmann::ordered_json CorpusStatistics(const Corpus &corpus);

}  // namespace vecevent::corpus

#endif  // VECEVENT_CORPUS_H_
