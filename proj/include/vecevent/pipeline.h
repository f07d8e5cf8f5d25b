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

#ifndef VECEVENT_PIPELINE_H_
#define VECEVENT_PIPELINE_H_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vecevent/corpus.h"
#include "vecevent/embed.h"
#include "vecevent/vecent.h"
#include "vecevent/vecom.h"

// Corpus-wide plumbing shared by the commands and cross-validation: windows
// for every aligned entity, per-role samples, per-type candidate pairs and
// composed event inputs.
namespace vecevent::pipeline {

struct EntityRef {
  std::size_t doc = 0;
  std::size_t entity = 0;
};

class Workspace {
 public:
  // Windows for every entity aligned to a sentence, in document order.
  Workspace(const corpus::Corpus &corpus, const embed::EmbeddingTable &table,
            int window, int jobs = 1);

  const corpus::Corpus &corpus() const { return *corpus_; }
  int window() const { return window_; }
  std::size_t size() const { return refs_.size(); }
  const std::vector<EntityRef> &refs() const { return refs_; }
  const std::vector<vecent::ContextWindow> &windows() const { return windows_; }
  const corpus::Entity &entity(std::size_t ref) const;
  // Workspace index of a document entity; throws if it has no window.
  std::size_t RefOf(std::size_t doc, std::size_t entity) const;

 private:
  const corpus::Corpus *corpus_;
  int window_;
  std::vector<EntityRef> refs_;
  std::vector<vecent::ContextWindow> windows_;
  std::vector<std::vector<std::size_t>> ref_of_;
};

// One-vs-all samples for `role` over the given workspace entities (all when
// `subset` is empty). Label 1 iff the entity fills the role in a gold event.
std::vector<vecent::ArgSample> ArgumentSamples(
    const Workspace &ws, const std::string &role,
    std::span<const std::size_t> subset = {});

struct PairRecord {
  std::size_t doc = 0;
  vecom::CandidatePair pair;
  vecom::PairLabel label;
  std::size_t first_ref = 0;
  std::size_t second_ref = 0;
};

// Candidate pairs of every sentence with their labels for one event type.
std::vector<PairRecord> EventPairs(const Workspace &ws,
                                   const EventSignature &signature,
                                   bool typed_candidates);

using ArgumentModels = std::map<std::string, vecent::ArgumentModel>;

// Argument embeddings of every workspace entity under each role's model
// (mlp_hidden x size()).
using EmbeddingCache = std::map<std::string, vecent::Matrix>;

EmbeddingCache ComputeEmbeddings(const Workspace &ws,
                                 const ArgumentModels &models,
                                 const std::vector<std::string> &roles,
                                 int jobs = 1);

// Composed VeCom vectors, one column per pair. Throws kConfig when a role
// has no cached embeddings.
vecent::Matrix ComposeInputs(const EmbeddingCache &cache,
                             const EventSignature &signature,
                             std::span<const PairRecord> pairs);

// Decoded events per document, indexed like corpus().documents. `pairs`
// must be grouped by document as EventPairs returns them.
std::vector<std::vector<corpus::Event>> DecodeCorpus(
    const Workspace &ws, std::span<const PairRecord> pairs,
    std::span<const vecom::EventPrediction> predictions,
    const std::string &event_type, double threshold);

}  // namespace vecevent::pipeline

#endif  // VECEVENT_PIPELINE_H_
