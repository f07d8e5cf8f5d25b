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

#include "vecevent/corpus.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vecevent/error.h"
#include "vecevent/parallel.h"

namespace vecevent::corpus {
namespace {

namespace fs = std::filesystem;

bool IsSpace(unsigned char c) { return std::isspace(c) != 0; }
bool IsWordChar(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

bool ParseOffset(const std::string &s, std::size_t &out) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      })) {
    return false;
  }
  out = std::stoull(s);
  return true;
}

struct RawEntity {
  Entity entity;
  std::vector<Span> fragments;
};

// Parses "Label Start End[;Start End...]" into label and code point spans.
bool ParseEntityHeader(const std::string &field, std::string &label,
                       std::vector<Span> &fragments) {
  std::size_t sp = field.find(' ');
  if (sp == std::string::npos) return false;
  label = field.substr(0, sp);
  std::stringstream rest(field.substr(sp + 1));
  std::string piece;
  while (std::getline(rest, piece, ';')) {
    auto words = SplitWords(piece);
    Span s;
    if (words.size() != 2 || !ParseOffset(words[0], s.begin) ||
        !ParseOffset(words[1], s.end) || s.end < s.begin) {
      return false;
    }
    fragments.push_back(s);
  }
  return !label.empty() && !fragments.empty();
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

const Entity *AnnotatedDocument::FindEntity(std::string_view id) const {
  auto it = entity_index_.find(std::string(id));
  return it == entity_index_.end() ? nullptr : &entities[it->second];
}

std::size_t AnnotatedDocument::EntityIndex(std::string_view id) const {
  auto it = entity_index_.find(std::string(id));
  if (it == entity_index_.end()) {
    throw Error(ErrorKind::kIntegrity, "unknown entity " + std::string(id) +
                                           " in document " + document.id);
  }
  return it->second;
}

void AnnotatedDocument::RebuildIndex() {
  entity_index_.clear();
  for (std::size_t i = 0; i < entities.size(); ++i) {
    entity_index_.emplace(entities[i].id, i);
  }
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  auto at = [&text](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  std::size_t i = 0;
  while (i < n) {
    if (IsSpace(at(i))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (IsWordChar(at(i))) {
      int depth = 0;
      while (j < n) {
        const unsigned char c = at(j);
        const bool next_is_word = j + 1 < n && IsWordChar(at(j + 1));
        if (IsWordChar(c)) {
          ++j;
        } else if ((c == '-' || c == '_' || c == '.') && next_is_word) {
          ++j;
        } else if (c == '(' && next_is_word) {
          ++depth;
          ++j;
        } else if (c == ')' && depth > 0) {
          --depth;
          ++j;
        } else {
          break;
        }
      }
    } else {
      while (j < n && !IsSpace(at(j)) && !IsWordChar(at(j))) ++j;
    }
    tokens.push_back({std::string(text.substr(i, j - i)), {i, j}, tokens.size()});
    i = j;
  }
  return tokens;
}

std::vector<Span> SplitSentences(std::string_view text,
                                 const std::vector<Span> &guards) {
  const std::size_t n = text.size();
  auto guarded = [&guards](std::size_t pos) {
    for (const Span &g : guards) {
      if (g.begin < pos && pos < g.end) return true;
    }
    return false;
  };
  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (c == '\n') {
      if (!guarded(i)) cuts.push_back(i);
    } else if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i + 1;
      if (j >= n || !IsSpace(static_cast<unsigned char>(text[j]))) continue;
      while (j < n && IsSpace(static_cast<unsigned char>(text[j]))) ++j;
      if (j >= n) continue;
      const unsigned char next = static_cast<unsigned char>(text[j]);
      if ((std::isupper(next) || std::isdigit(next)) && !guarded(i + 1)) {
        cuts.push_back(i + 1);
      }
    }
  }
  cuts.push_back(n);
  std::vector<Span> spans;
  std::size_t start = 0;
  for (std::size_t cut : cuts) {
    std::size_t b = start, e = cut;
    while (b < e && IsSpace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && IsSpace(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) spans.push_back({b, e});
    start = cut;
  }
  return spans;
}

void AlignEntities(const Sentence &sentence, std::size_t sentence_index,
                   std::vector<Entity *> entities) {
  for (Entity *e : entities) {
    if (!sentence.span.Contains(e->span)) {
      if (sentence.span.Overlaps(e->span)) {
        throw Error(ErrorKind::kAlignment,
                    "entity " + e->id + " crosses the boundary of sentence " +
                        sentence.id);
      }
      continue;
    }
    std::size_t first = sentence.tokens.size(), last = 0;
    for (const Token &t : sentence.tokens) {
      if (t.span.Overlaps(e->span)) {
        first = std::min(first, t.index);
        last = std::max(last, t.index);
      }
    }
    if (first == sentence.tokens.size()) {
      throw Error(ErrorKind::kAlignment,
                  "entity " + e->id + " covers no token of sentence " +
                      sentence.id);
    }
    e->sentence = sentence_index;
    e->first_token = first;
    e->last_token = last;
    e->partial_token = sentence.tokens[first].span.begin < e->span.begin ||
                       sentence.tokens[last].span.end > e->span.end;
  }
}

std::vector<std::size_t> CodepointOffsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    // Continuation bytes do not start a code point.
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      offsets.push_back(i);
    }
  }
  offsets.push_back(text.size());
  return offsets;
}

AnnotatedDocument ParseStandoff(const std::string &doc_id,
                                const std::string &text,
                                std::string_view entity_lines,
                                std::string_view event_lines,
                                const TaskSchema &schema,
                                const std::string &entity_source,
                                const std::string &event_source) {
  AnnotatedDocument doc;
  doc.document.id = doc_id;
  doc.document.text = text;
  const std::vector<std::size_t> cp = CodepointOffsets(text);
  const std::size_t cp_count = cp.size() - 1;

  std::set<std::string> ignored_ids;
  std::vector<std::string> seen_event_ids;

  struct PendingEvent {
    std::string id, type;
    std::vector<std::pair<std::string, std::string>> args;
    std::string source;
    std::size_t line;
  };
  std::vector<PendingEvent> pending;

  auto parse_file = [&](std::string_view content, const std::string &source) {
    std::size_t line_no = 0;
    for (std::string_view line : Lines(content)) {
      ++line_no;
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      const char kind = line.front();
      if (kind == '*' || kind == 'N' || kind == 'A' || kind == 'M' ||
          kind == '#') {
        ++doc.report.skipped_lines;
        continue;
      }
      auto fields = SplitTabs(line);
      if (kind == 'T') {
        if (fields.size() < 2) {
          throw Error(ErrorKind::kParse, "malformed entity line", source,
                      line_no);
        }
        RawEntity raw;
        raw.entity.id = fields[0];
        if (!ParseEntityHeader(fields[1], raw.entity.label, raw.fragments)) {
          throw Error(ErrorKind::kParse,
                      "malformed entity header '" + fields[1] + "'", source,
                      line_no);
        }
        if (doc.FindEntity(raw.entity.id) != nullptr ||
            ignored_ids.count(raw.entity.id) > 0) {
          throw Error(ErrorKind::kParse, "duplicate entity id " + raw.entity.id,
                      source, line_no);
        }
        // Code point offsets -> byte offsets.
        std::string joined;
        for (Span &f : raw.fragments) {
          if (f.end > cp_count) {
            throw Error(ErrorKind::kAlignment,
                        "entity " + raw.entity.id + " offsets exceed text length",
                        source, line_no);
          }
          f = {cp[f.begin], cp[f.end]};
          if (!joined.empty()) joined.push_back(' ');
          joined += text.substr(f.begin, f.length());
        }
        if (fields.size() >= 3 && fields[2] != joined) {
          throw Error(ErrorKind::kAlignment,
                      "entity " + raw.entity.id + " surface '" + fields[2] +
                          "' does not match text '" + joined + "'",
                      source, line_no);
        }
        if (schema.IsIgnored(raw.entity.label)) {
          ignored_ids.insert(raw.entity.id);
          ++doc.report.ignored_entities;
          continue;
        }
        raw.entity.span = {raw.fragments.front().begin, raw.fragments.front().end};
        for (const Span &f : raw.fragments) {
          raw.entity.span.begin = std::min(raw.entity.span.begin, f.begin);
          raw.entity.span.end = std::max(raw.entity.span.end, f.end);
        }
        doc.entities.push_back(std::move(raw.entity));
        doc.RebuildIndex();
      } else if (kind == 'R' || kind == 'E') {
        if (fields.size() < 2) {
          throw Error(ErrorKind::kParse, "malformed event line", source, line_no);
        }
        auto words = SplitWords(fields[1]);
        if (words.empty()) {
          throw Error(ErrorKind::kParse, "event line without type", source,
                      line_no);
        }
        PendingEvent ev{fields[0], words[0], {}, source, line_no};
        if (auto colon = ev.type.find(':'); colon != std::string::npos) {
          ev.type.resize(colon);  // "Type:Trigger" form
        }
        for (std::size_t k = 1; k < words.size(); ++k) {
          auto colon = words[k].find(':');
          if (colon == std::string::npos || colon == 0 ||
              colon + 1 == words[k].size()) {
            throw Error(ErrorKind::kParse,
                        "malformed argument '" + words[k] + "'", source,
                        line_no);
          }
          ev.args.emplace_back(words[k].substr(0, colon),
                               words[k].substr(colon + 1));
        }
        if (std::find(seen_event_ids.begin(), seen_event_ids.end(), ev.id) !=
            seen_event_ids.end()) {
          throw Error(ErrorKind::kParse, "duplicate event id " + ev.id, source,
                      line_no);
        }
        seen_event_ids.push_back(ev.id);
        pending.push_back(std::move(ev));
      } else {
        throw Error(ErrorKind::kParse,
                    "unrecognized line '" + std::string(line) + "'", source,
                    line_no);
      }
    }
  };
  parse_file(entity_lines, entity_source);
  parse_file(event_lines, event_source);

  for (const PendingEvent &ev : pending) {
    const EventSignature *sig = schema.FindEvent(ev.type);
    if (sig == nullptr) {
      ++doc.report.skipped_events;
      continue;
    }
    if (ev.args.size() != 2) {
      throw Error(ErrorKind::kParse,
                  "event " + ev.id + " needs exactly two arguments", ev.source,
                  ev.line);
    }
    bool touches_ignored = false;
    for (const auto &[role, id] : ev.args) {
      if (ignored_ids.count(id) > 0) {
        touches_ignored = true;
      } else if (doc.FindEntity(id) == nullptr) {
        throw Error(ErrorKind::kIntegrity,
                    "event " + ev.id + " references unknown entity " + id,
                    ev.source, ev.line);
      }
    }
    if (touches_ignored) {
      ++doc.report.skipped_events;
      continue;
    }
    Event event{ev.id, ev.type, "", "", false};
    for (const auto &[role, id] : ev.args) {
      if (role == sig->source_role && event.source.empty()) {
        event.source = id;
      } else if (role == sig->target_role && event.target.empty()) {
        event.target = id;
      }
    }
    if (event.source.empty() || event.target.empty()) {
      throw Error(ErrorKind::kSchema,
                  "event " + ev.id + " roles do not match " + sig->type + "(" +
                      sig->source_role + "->" + sig->target_role + ")",
                  ev.source, ev.line);
    }
    if (event.source == event.target) {
      throw Error(ErrorKind::kIntegrity,
                  "event " + ev.id + " links entity " + event.source +
                      " to itself",
                  ev.source, ev.line);
    }
    doc.events.push_back(std::move(event));
  }

  // Sentences, tokens and alignment.
  std::vector<Span> guards;
  for (const Entity &e : doc.entities) guards.push_back(e.span);
  std::vector<Entity *> all;
  for (Entity &e : doc.entities) all.push_back(&e);
  std::size_t s_index = 0;
  for (const Span &span : SplitSentences(text, guards)) {
    Sentence sentence;
    sentence.id = doc_id + "-s" + std::to_string(s_index);
    sentence.span = span;
    sentence.tokens = Tokenize(std::string_view(text).substr(span.begin, span.length()));
    for (Token &t : sentence.tokens) {
      t.span.begin += span.begin;
      t.span.end += span.begin;
    }
    AlignEntities(sentence, s_index, all);
    doc.document.sentences.push_back(std::move(sentence));
    ++s_index;
  }
  for (std::size_t i = 0; i < doc.entities.size(); ++i) {
    Entity &e = doc.entities[i];
    if (e.sentence == kNoSentence) {
      throw Error(ErrorKind::kAlignment,
                  "entity " + e.id + " lies outside every sentence",
                  entity_source, 0);
    }
    if (e.partial_token) ++doc.report.partial_tokens;
    doc.document.sentences[e.sentence].entities.push_back(i);
  }
  for (Sentence &s : doc.document.sentences) {
    std::stable_sort(s.entities.begin(), s.entities.end(),
                     [&doc](std::size_t a, std::size_t b) {
                       const Span &x = doc.entities[a].span;
                       const Span &y = doc.entities[b].span;
                       return x.begin != y.begin ? x.begin < y.begin
                                                 : x.end < y.end;
                     });
  }
  for (Event &ev : doc.events) {
    const EventSignature *sig = schema.FindEvent(ev.type);
    Entity &src = doc.entities[doc.EntityIndex(ev.source)];
    Entity &tgt = doc.entities[doc.EntityIndex(ev.target)];
    src.arguments.insert(sig->source_role);
    tgt.arguments.insert(sig->target_role);
    ev.cross_sentence = src.sentence != tgt.sentence;
    if (ev.cross_sentence) ++doc.report.cross_sentence_events;
  }
  return doc;
}

std::string WriteStandoff(const std::vector<Event> &events,
                          const TaskSchema &schema) {
  std::string out;
  std::size_t n = 0;
  for (const Event &ev : events) {
    const EventSignature *sig = schema.FindEvent(ev.type);
    if (sig == nullptr) {
      throw Error(ErrorKind::kSchema, "unknown event type " + ev.type);
    }
    out += "R" + std::to_string(++n) + "\t" + ev.type + " " + sig->source_role +
           ":" + ev.source + " " + sig->target_role + ":" + ev.target + "\n";
  }
  return out;
}

Corpus LoadCorpus(const std::vector<std::string> &directories,
                  const TaskSchema &schema, int jobs) {
  std::vector<fs::path> texts;
  for (const std::string &dir : directories) {
    if (!fs::is_directory(dir)) {
      throw Error(ErrorKind::kIo, "corpus directory not found: " + dir);
    }
    std::vector<fs::path> found;
    for (const auto &entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        found.push_back(entry.path());
      }
    }
    std::sort(found.begin(), found.end());
    texts.insert(texts.end(), found.begin(), found.end());
  }
  if (texts.empty()) {
    throw Error(ErrorKind::kIo, "no .txt documents found in corpus directories");
  }
  Corpus corpus;
  corpus.schema = schema;
  corpus.documents.resize(texts.size());
  ParallelFor(texts.size(), jobs, [&](std::size_t i) {
    const fs::path &txt = texts[i];
    fs::path a1 = txt, a2 = txt;
    a1.replace_extension(".a1");
    a2.replace_extension(".a2");
    const std::string text = ReadFile(txt);
    const std::string entities = fs::exists(a1) ? ReadFile(a1) : "";
    const std::string events = fs::exists(a2) ? ReadFile(a2) : "";
    corpus.documents[i] =
        ParseStandoff(txt.stem().string(), text, entities, events, schema,
                      a1.string(), a2.string());
  });
  for (auto &doc : corpus.documents) doc.RebuildIndex();
  return corpus;
}

nlohmann::ordered_json CorpusStatistics(const Corpus &corpus) {
  using nlohmann::ordered_json;
  std::size_t sentences = 0, tokens = 0, entities = 0, events = 0;
  std::size_t cross = 0, skipped = 0, ignored = 0, partial = 0;
  std::map<std::string, std::size_t> by_event, by_role, by_label;
  for (const auto &doc : corpus.documents) {
    sentences += doc.document.sentences.size();
    for (const auto &s : doc.document.sentences) tokens += s.tokens.size();
    entities += doc.entities.size();
    events += doc.events.size();
    cross += doc.report.cross_sentence_events;
    skipped += doc.report.skipped_events;
    ignored += doc.report.ignored_entities;
    partial += doc.report.partial_tokens;
    for (const auto &ev : doc.events) ++by_event[ev.type];
    for (const auto &e : doc.entities) {
      ++by_label[e.label];
      for (const auto &role : e.arguments) ++by_role[role];
    }
  }
  ordered_json event_rows = ordered_json::array();
  for (const auto &sig : corpus.schema.events()) {
    event_rows.push_back({{"event_type", sig.type},
                          {"arguments", sig.source_role + "->" + sig.target_role},
                          {"count", by_event[sig.type]}});
  }
  ordered_json arg_rows = ordered_json::array();
  for (const auto &role : corpus.schema.ArgumentTypes()) {
    arg_rows.push_back({{"argument_type", role}, {"count", by_role[role]}});
  }
  ordered_json labels = ordered_json::object();
  for (const auto &[label, n] : by_label) labels[label] = n;
  return {{"task", corpus.schema.name()},
          {"documents", corpus.documents.size()},
          {"sentences", sentences},
          {"tokens", tokens},
          {"entities", entities},
          {"events", events},
          {"cross_sentence_events", cross},
          {"skipped_events", skipped},
          {"ignored_entities", ignored},
          {"partial_token_entities", partial},
          {"event_types", event_rows},
          {"argument_types", arg_rows},
          {"entity_labels", labels}};
}

}  // namespace vecevent::corpus
