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

#include "vecevent/synth.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "fmt/format.h"
#include "vecevent/error.h"
#include "vecevent/random.h"

namespace vecevent::synth {
namespace {

struct Template {
  const char *text;  // {0} {1} {2} mark entity slots
  int source;        // slot indices of the planted event, -1 for none
  int target;
};

constexpr Template kTemplates[] = {
    {"{0} activates {1}", 0, 1},
    {"{0} is activated by {1}", 1, 0},
    {"{0} strongly induces {1}", 0, 1},
    {"{0} is induced by {1}", 1, 0},
    {"{0} binds {1}", -1, -1},
    {"{0} and {1} were detected", -1, -1},
    {"{0} is unrelated to {1}", -1, -1},
    {"{0} was compared with {1}", -1, -1},
};

constexpr const char *kPrefixes[] = {
    "We found that ", "Notably, ", "Here ", "In vivo, ",
    "Moreover, ", "Results show that ", "Surprisingly, ", "Thus "};

constexpr const char *kSuffixes[] = {" in cells lacking {2}",
                                     " together with {2}",
                                     " whereas {2} was absent"};

std::string GeneName(Rng &rng) {
  static constexpr char kConsonants[] = "bcdfghklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  std::string name;
  name += kConsonants[rng.Below(sizeof(kConsonants) - 1)];
  name += kVowels[rng.Below(sizeof(kVowels) - 1)];
  name += kConsonants[rng.Below(sizeof(kConsonants) - 1)];
  name += static_cast<char>('A' + rng.Below(26));
  return name;
}

}  // namespace

TaskSchema SynthSchema() { return TaskSchema::Builtin("synthetic"); }

std::vector<SynthDocument> GenerateDocuments(const SynthOptions &options) {
  if (options.documents < 1 || options.sentences_per_document < 1) {
    throw Error(ErrorKind::kConfig, "synthetic corpus needs documents");
  }
  if (options.name_pool < 0 || options.name_pool == 1 ||
      options.name_pool == 2) {
    throw Error(ErrorKind::kConfig, "name pool must be 0 or at least 3");
  }
  Rng rng(Mix64(options.seed));
  std::vector<std::string> pool;
  for (std::set<std::string> seen;
       static_cast<int>(pool.size()) < options.name_pool;) {
    std::string n = GeneName(rng);
    if (seen.insert(n).second) pool.push_back(std::move(n));
  }
  std::vector<SynthDocument> docs;
  for (int d = 0; d < options.documents; ++d) {
    SynthDocument doc;
    doc.id = fmt::format("SYN-{:04d}", d + 1);
    int entity_no = 0, event_no = 0;
    for (int s = 0; s < options.sentences_per_document; ++s) {
      const Template &tpl = kTemplates[rng.Below(std::size(kTemplates))];
      std::string pattern = tpl.text;
      int slots = 2;
      if (rng.Uniform() < options.distractor_rate) {
        pattern += kSuffixes[rng.Below(std::size(kSuffixes))];
        slots = 3;
      }
      std::vector<std::string> names;
      std::set<std::string> used;
      while (static_cast<int>(names.size()) < slots) {
        std::string n = pool.empty() ? GeneName(rng) : pool[rng.Below(pool.size())];
        if (used.insert(n).second) names.push_back(std::move(n));
      }
      if (!doc.text.empty()) doc.text += ' ';
      doc.text += kPrefixes[rng.Below(std::size(kPrefixes))];
      std::vector<std::string> ids(static_cast<std::size_t>(slots));
      for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] == '{') {
          const auto slot = static_cast<std::size_t>(pattern[i + 1] - '0');
          const std::size_t begin = doc.text.size();
          doc.text += names[slot];
          ids[slot] = fmt::format("T{}", ++entity_no);
          doc.a1 += fmt::format("{}\tProtein {} {}\t{}\n", ids[slot], begin,
                                doc.text.size(), names[slot]);
          i += 2;
        } else {
          doc.text += pattern[i];
        }
      }
      doc.text += '.';
      if (tpl.source >= 0) {
        doc.a2 += fmt::format("R{}\tActivation Agent:{} Target:{}\n",
                              ++event_no, ids[static_cast<std::size_t>(tpl.source)],
                              ids[static_cast<std::size_t>(tpl.target)]);
      }
    }
    doc.text += '\n';
    docs.push_back(std::move(doc));
  }
  return docs;
}

corpus::Corpus ParseDocuments(const std::vector<SynthDocument> &docs,
                              const TaskSchema &schema) {
  corpus::Corpus out;
  out.schema = schema;
  for (const SynthDocument &d : docs) {
    out.documents.push_back(corpus::ParseStandoff(
        d.id, d.text, d.a1, d.a2, schema, d.id + ".a1", d.id + ".a2"));
  }
  return out;
}

void WriteDocuments(const std::vector<SynthDocument> &docs,
                    const std::string &directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto write = [](const fs::path &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) {
      throw Error(ErrorKind::kIo, "cannot write " + path.string());
    }
  };
  for (const SynthDocument &d : docs) {
    write(fs::path(directory) / (d.id + ".txt"), d.text);
    write(fs::path(directory) / (d.id + ".a1"), d.a1);
    write(fs::path(directory) / (d.id + ".a2"), d.a2);
  }
}

}  // namespace vecevent::synth
