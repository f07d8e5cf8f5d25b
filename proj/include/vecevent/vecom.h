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

#ifndef VECEVENT_VECOM_H_
#define VECEVENT_VECOM_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vecevent/corpus.h"
#include "vecevent/ndiff/layers.h"
#include "vecevent/ndiff/tape.h"
#include "vecevent/random.h"
#include "vecevent/schema.h"
#include "vecevent/vecent.h"

// Directed event classifiers over composed argument embeddings.
namespace vecevent::vecom {

using ndiff::Matrix;
using ndiff::Tape;
using ndiff::Var;
using ndiff::Vector;

// Ordered pair of distinct entities of one sentence. Entity fields index the
// document's entity list.
struct CandidatePair {
  std::size_t sentence = 0;
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const CandidatePair &, const CandidatePair &) = default;
};

// All n(n-1) ordered pairs of the sentence's entities, first-major in text
// order.
std::vector<CandidatePair> GenerateCandidates(
    const corpus::AnnotatedDocument &doc, std::size_t sentence);

// Same, keeping only pairs whose entity types fit the event's roles in one
// of the two orientations.
std::vector<CandidatePair> GenerateTypedCandidates(
    const corpus::AnnotatedDocument &doc, std::size_t sentence,
    const TaskSchema &schema, const EventSignature &signature);

struct PairLabel {
  int exists = 0;
  int forward = 0;

  friend bool operator==(const PairLabel &, const PairLabel &) = default;
};

// exists = 1 iff a same-sentence gold event of `event_type` links the two
// entities; forward = 1 iff it runs first -> second. Throws kData when gold
// events of the type link the same two entities in both directions.
std::vector<PairLabel> LabelPairs(const corpus::AnnotatedDocument &doc,
                                  std::span<const CandidatePair> pairs,
                                  const std::string &event_type);

// <Rs(first) (+) Rt(first), Rt(second) (+) Rs(second)>.
struct PairInput {
  Vector first;
  Vector second;
};

PairInput MakePairInput(const Vector &source_first, const Vector &target_first,
                        const Vector &target_second,
                        const Vector &source_second);

// Elementwise first - second. Throws kShape on a size mismatch.
Vector Compose(const PairInput &input);
Var Compose(Var first, Var second);

struct EventPrediction {
  double p_exists = 0.0;
  double p_forward = 0.0;
};

struct EventOutputs {
  Var p_exists;   // 1 x B
  Var p_forward;  // 1 x B
};

class EventModel {
 public:
  EventModel(std::string event_type, std::string source_role,
             std::string target_role, int input_dim, int hidden);

  const std::string &event_type() const { return event_type_; }
  const std::string &source_role() const { return source_role_; }
  const std::string &target_role() const { return target_role_; }
  int input_dim() const { return exist_hidden_.input_size(); }
  int hidden() const { return exist_hidden_.output_size(); }

  void Initialize(Rng &rng);

  // Existence head on Abs(v), direction head on v; v is input_dim x B.
  EventOutputs Forward(Tape &tape, Var composed);
  EventOutputs Forward(Tape &tape, Var composed) const;

  std::vector<EventPrediction> Predict(const Matrix &composed) const;
  EventPrediction Predict(const PairInput &input) const;

  std::vector<ndiff::NamedTensor> Parameters();
  void Save(std::ostream &out) const;
  void Load(std::istream &in);

  ndiff::DenseParams &exist_hidden() { return exist_hidden_; }
  ndiff::DenseParams &exist_output() { return exist_output_; }
  ndiff::DenseParams &direction_hidden() { return direction_hidden_; }
  ndiff::DenseParams &direction_output() { return direction_output_; }

 private:
  template <typename Self>
  static EventOutputs ForwardImpl(Self &self, Tape &tape, Var composed);

  std::string event_type_;
  std::string source_role_;
  std::string target_role_;
  ndiff::DenseParams exist_hidden_;
  ndiff::DenseParams exist_output_;
  ndiff::DenseParams direction_hidden_;
  ndiff::DenseParams direction_output_;
};

struct EventHyper {
  int hidden = 64;
  int batch = 32;
  int epochs = 10;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double oversample_ratio = 5.0;
};

// BCE(exists) + BCE(forward masked to exists = 1), summed over the batch.
Var EventLoss(const EventOutputs &out, std::span<const PairLabel> labels);

struct EventEpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double exists_accuracy = 0.0;
  double direction_accuracy = 0.0;  // over pairs with exists = 1
};

struct EventTrainResult {
  EventModel model;
  std::vector<EventEpochRecord> log;
  std::size_t trained_samples = 0;
};

// `composed` holds one composed vector per column, aligned with `labels`.
EventTrainResult TrainEventModel(const EventSignature &signature,
                                 const Matrix &composed,
                                 std::span<const PairLabel> labels,
                                 const EventHyper &hyper, Rng &rng);

std::string EventLogCsv(const std::vector<EventEpochRecord> &log);

// For each unordered pair whose best ordering reaches `threshold` in
// p_exists, keeps that ordering (ties go to the earlier pair) and orients the
// event by its p_forward. Event ids are left empty; duplicates are dropped.
std::vector<corpus::Event> DecodeEvents(
    const corpus::AnnotatedDocument &doc,
    std::span<const CandidatePair> pairs,
    std::span<const EventPrediction> predictions,
    const std::string &event_type, double threshold = 0.5);

}  // namespace vecevent::vecom

#endif  // VECEVENT_VECOM_H_
