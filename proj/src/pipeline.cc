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

#include "vecevent/pipeline.h"

#include <algorithm>

#include "fmt/format.h"
#include "vecevent/error.h"
#include "vecevent/parallel.h"

namespace vecevent::pipeline {
namespace {

constexpr std::size_t kNoRef = static_cast<std::size_t>(-1);
constexpr std::size_t kEmbedChunk = 256;

}  // namespace

Workspace::Workspace(const corpus::Corpus &corpus,
                     const embed::EmbeddingTable &table, int window, int jobs)
    : corpus_(&corpus), window_(window) {
  if (window < 1) {
    throw Error(ErrorKind::kConfig,
                fmt::format("context window must be >= 1, got {}", window));
  }
  ref_of_.resize(corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto &doc = corpus.documents[d];
    ref_of_[d].assign(doc.entities.size(), kNoRef);
    for (const auto &sentence : doc.document.sentences) {
      for (std::size_t e : sentence.entities) {
        ref_of_[d][e] = refs_.size();
        refs_.push_back({d, e});
      }
    }
  }
  windows_.resize(refs_.size());
  ParallelFor(refs_.size(), jobs, [&](std::size_t i) {
    const auto &doc = corpus.documents[refs_[i].doc];
    const corpus::Entity &ent = doc.entities[refs_[i].entity];
    windows_[i] = vecent::BuildContext(doc.document.sentences[ent.sentence],
                                       ent, window, table);
  });
}

const corpus::Entity &Workspace::entity(std::size_t ref) const {
  const EntityRef &r = refs_.at(ref);
  return corpus_->documents[r.doc].entities[r.entity];
}

std::size_t Workspace::RefOf(std::size_t doc, std::size_t entity) const {
  const std::size_t ref = ref_of_.at(doc).at(entity);
  if (ref == kNoRef) {
    throw Error(ErrorKind::kAlignment,
                fmt::format("entity {} of {} lies in no sentence",
                            corpus_->documents[doc].entities[entity].id,
                            corpus_->documents[doc].document.id));
  }
  return ref;
}

std::vector<vecent::ArgSample> ArgumentSamples(
    const Workspace &ws, const std::string &role,
    std::span<const std::size_t> subset) {
  std::vector<vecent::ArgSample> out;
  auto add = [&](std::size_t ref) {
    const corpus::Entity &e = ws.entity(ref);
    out.push_back({ref, e.arguments.contains(role) ? 1 : 0, e.id});
  };
  if (subset.empty()) {
    out.reserve(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) add(i);
  } else {
    out.reserve(subset.size());
    for (std::size_t i : subset) add(i);
  }
  return out;
}

std::vector<PairRecord> EventPairs(const Workspace &ws,
                                   const EventSignature &signature,
                                   bool typed_candidates) {
  std::vector<PairRecord> out;
  const corpus::Corpus &corpus = ws.corpus();
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto &doc = corpus.documents[d];
    for (std::size_t s = 0; s < doc.document.sentences.size(); ++s) {
      auto pairs = typed_candidates
                       ? vecom::GenerateTypedCandidates(doc, s, corpus.schema,
                                                        signature)
                       : vecom::GenerateCandidates(doc, s);
      if (pairs.empty()) continue;
      auto labels = vecom::LabelPairs(doc, pairs, signature.type);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        out.push_back({d, pairs[i], labels[i], ws.RefOf(d, pairs[i].first),
                       ws.RefOf(d, pairs[i].second)});
      }
    }
  }
  return out;
}

EmbeddingCache ComputeEmbeddings(const Workspace &ws,
                                 const ArgumentModels &models,
                                 const std::vector<std::string> &roles,
                                 int jobs) {
  EmbeddingCache cache;
  for (const std::string &role : roles) {
    auto it = models.find(role);
    if (it == models.end()) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("no argument model for role {}", role));
    }
    const vecent::ArgumentModel &model = it->second;
    vecent::Matrix r(model.mlp_hidden(), static_cast<Eigen::Index>(ws.size()));
    const std::size_t chunks = (ws.size() + kEmbedChunk - 1) / kEmbedChunk;
    ParallelFor(chunks, jobs, [&](std::size_t c) {
      const std::size_t begin = c * kEmbedChunk;
      const std::size_t end = std::min(ws.size(), begin + kEmbedChunk);
      std::vector<const vecent::ContextWindow *> batch;
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(&ws.windows()[i]);
      }
      r.middleCols(static_cast<Eigen::Index>(begin),
                   static_cast<Eigen::Index>(end - begin)) =
          model.ArgumentEmbeddings(batch);
    });
    cache.emplace(role, std::move(r));
  }
  return cache;
}

vecent::Matrix ComposeInputs(const EmbeddingCache &cache,
                             const EventSignature &signature,
                             std::span<const PairRecord> pairs) {
  auto find = [&](const std::string &role) -> const vecent::Matrix & {
    auto it = cache.find(role);
    if (it == cache.end()) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("event type {} needs argument model {}",
                              signature.type, role));
    }
    return it->second;
  };
  const vecent::Matrix &rs = find(signature.source_role);
  const vecent::Matrix &rt = find(signature.target_role);
  const Eigen::Index d = rs.rows();
  if (rt.rows() != d) {
    throw Error(ErrorKind::kShape,
                fmt::format("argument embeddings of {} and {} differ in size",
                            signature.source_role, signature.target_role));
  }
  vecent::Matrix out(2 * d, static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto a = static_cast<Eigen::Index>(pairs[k].first_ref);
    const auto b = static_cast<Eigen::Index>(pairs[k].second_ref);
    const auto col = static_cast<Eigen::Index>(k);
    out.col(col).head(d) = rs.col(a) - rt.col(b);
    out.col(col).tail(d) = rt.col(a) - rs.col(b);
  }
  return out;
}

std::vector<std::vector<corpus::Event>> DecodeCorpus(
    const Workspace &ws, std::span<const PairRecord> pairs,
    std::span<const vecom::EventPrediction> predictions,
    const std::string &event_type, double threshold) {
  if (pairs.size() != predictions.size()) {
    throw Error(ErrorKind::kShape, "decode: pairs and predictions differ");
  }
  const corpus::Corpus &corpus = ws.corpus();
  std::vector<std::vector<corpus::Event>> out(corpus.documents.size());
  std::size_t begin = 0;
  while (begin < pairs.size()) {
    std::size_t end = begin;
    const std::size_t d = pairs[begin].doc;
    std::vector<vecom::CandidatePair> doc_pairs;
    while (end < pairs.size() && pairs[end].doc == d) {
      doc_pairs.push_back(pairs[end].pair);
      ++end;
    }
    auto events = vecom::DecodeEvents(corpus.documents[d], doc_pairs,
                                      predictions.subspan(begin, end - begin),
                                      event_type, threshold);
    auto &dst = out[d];
    dst.insert(dst.end(), events.begin(), events.end());
    begin = end;
  }
  return out;
}

}  // namespace vecevent::pipeline
