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

#ifndef VECEVENT_SYNTH_H_
#define VECEVENT_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vecevent/corpus.h"
#include "vecevent/schema.h"

// Planted-pattern corpus: gene-like names in a handful of sentence templates,
// where the verb decides whether an Activation event exists and which way it
// points.
namespace vecevent::synth {

struct SynthOptions {
  int documents = 100;
  int sentences_per_document = 5;
  // Chance that a sentence carries a third, unrelated entity.
  double distractor_rate = 0.4;
  // Distinct gene names drawn per sentence slot; 0 invents a fresh name for
  // every mention.
  int name_pool = 10;
  std::uint64_t seed = 7;
};

struct SynthDocument {
  std::string id;
  std::string text;
  std::string a1;
  std::string a2;
};

// "synthetic": event Activation Agent -> Target.
TaskSchema SynthSchema();

std::vector<SynthDocument> GenerateDocuments(const SynthOptions &options);

corpus::Corpus ParseDocuments(const std::vector<SynthDocument> &docs,
                      const TaskSchema &schema);

// Writes <id>.txt, <id>.a1 and <id>.a2 into `directory` (created if needed).
void WriteDocuments(const std::vector<SynthDocument> &docs,
                    const std::string &directory);

}  // namespace vecevent::synth

#endif  // VECEVENT_SYNTH_H_
