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

#include "vecevent/vecom.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "fmt/format.h"
#include "vecevent/error.h"
#include "vecevent/ndiff/checkpoint.h"
#include "vecevent/ndiff/ops.h"
#include "vecevent/ndiff/sgd.h"

namespace vecevent::vecom {
namespace {

const corpus::Sentence &SentenceAt(const corpus::AnnotatedDocument &doc,
                                   std::size_t sentence) {
  if (sentence >= doc.document.sentences.size()) {
    throw Error(ErrorKind::kShape,
                fmt::format("sentence {} out of range in {}", sentence,
                            doc.document.id));
  }
  return doc.document.sentences[sentence];
}

}  // namespace

std::vector<CandidatePair> GenerateCandidates(
    const corpus::AnnotatedDocument &doc, std::size_t sentence) {
  const auto &ents = SentenceAt(doc, sentence).entities;
  std::vector<CandidatePair> out;
  if (ents.size() < 2) return out;
  out.reserve(ents.size() * (ents.size() - 1));
  for (std::size_t a : ents) {
    for (std::size_t b : ents) {
      if (a != b) out.push_back({sentence, a, b});
    }
  }
  return out;
}

std::vector<CandidatePair> GenerateTypedCandidates(
    const corpus::AnnotatedDocument &doc, std::size_t sentence,
    const TaskSchema &schema, const EventSignature &signature) {
  auto fits = [&](std::size_t s, std::size_t t) {
    return schema.RoleAccepts(signature.source_role, doc.entities[s].label) &&
           schema.RoleAccepts(signature.target_role, doc.entities[t].label);
  };
  std::vector<CandidatePair> out;
  for (const CandidatePair &p : GenerateCandidates(doc, sentence)) {
    if (fits(p.first, p.second) || fits(p.second, p.first)) out.push_back(p);
  }
  return out;
}

std::vector<PairLabel> LabelPairs(const corpus::AnnotatedDocument &doc,
                                  std::span<const CandidatePair> pairs,
                                  const std::string &event_type) {
  // Unordered key -> direction (true when smaller index is the source).
  std::map<std::pair<std::size_t, std::size_t>, bool> links;
  for (const corpus::Event &e : doc.events) {
    if (e.type != event_type || e.cross_sentence) continue;
    const std::size_t s = doc.EntityIndex(e.source);
    const std::size_t t = doc.EntityIndex(e.target);
    const auto key = std::minmax(s, t);
    const bool dir = s < t;
    auto [it, inserted] = links.emplace(key, dir);
    if (!inserted && it->second != dir) {
      throw Error(ErrorKind::kData,
                  fmt::format("{}: {} events link {} and {} in both "
                              "directions",
                              doc.document.id, event_type, e.source, e.target));
    }
  }
  std::vector<PairLabel> out;
  out.reserve(pairs.size());
  for (const CandidatePair &p : pairs) {
    auto it = links.find(std::minmax(p.first, p.second));
    if (it == links.end()) {
      out.push_back({0, 0});
    } else {
      const bool forward = it->second == (p.first < p.second);
      out.push_back({1, forward ? 1 : 0});
    }
  }
  return out;
}

PairInput MakePairInput(const Vector &source_first, const Vector &target_first,
                        const Vector &target_second,
                        const Vector &source_second) {
  PairInput in;
  in.first.resize(source_first.size() + target_first.size());
  in.first << source_first, target_first;
  in.second.resize(target_second.size() + source_second.size());
  in.second << target_second, source_second;
  return in;
}

Vector Compose(const PairInput &input) {
  if (input.first.size() != input.second.size()) {
    throw Error(ErrorKind::kShape,
                fmt::format("compose: halves have sizes {} and {}",
                            input.first.size(), input.second.size()));
  }
  return input.first - input.second;
}

Var Compose(Var first, Var second) { return ndiff::Sub(first, second); }

EventModel::EventModel(std::string event_type, std::string source_role,
                       std::string target_role, int input_dim, int hidden)
    : event_type_(std::move(event_type)),
      source_role_(std::move(source_role)),
      target_role_(std::move(target_role)),
      exist_hidden_(input_dim, hidden),
      exist_output_(hidden, 1),
      direction_hidden_(input_dim, hidden),
      direction_output_(hidden, 1) {}

void EventModel::Initialize(Rng &rng) {
  exist_hidden_.Initialize(rng);
  exist_output_.Initialize(rng);
  direction_hidden_.Initialize(rng);
  direction_output_.Initialize(rng);
}

template <typename Self>
EventOutputs EventModel::ForwardImpl(Self &self, Tape &tape, Var composed) {
  if (composed.rows() != self.input_dim()) {
    throw Error(ErrorKind::kShape,
                fmt::format("event model {} expects {} inputs, got {}",
                            self.event_type_, self.input_dim(),
                            composed.rows()));
  }
  Var e = ndiff::Relu(
      ndiff::Affine(tape, self.exist_hidden_, ndiff::Abs(composed)));
  Var d = ndiff::Relu(ndiff::Affine(tape, self.direction_hidden_, composed));
  return {ndiff::Sigmoid(ndiff::Affine(tape, self.exist_output_, e)),
          ndiff::Sigmoid(ndiff::Affine(tape, self.direction_output_, d))};
}

EventOutputs EventModel::Forward(Tape &tape, Var composed) {
  return ForwardImpl(*this, tape, composed);
}

EventOutputs EventModel::Forward(Tape &tape, Var composed) const {
  return ForwardImpl(*this, tape, composed);
}

std::vector<EventPrediction> EventModel::Predict(const Matrix &composed) const {
  std::vector<EventPrediction> out;
  if (composed.cols() == 0) return out;
  Tape tape(Tape::Mode::kInference);
  EventOutputs o = Forward(tape, tape.Constant(composed));
  out.reserve(static_cast<std::size_t>(composed.cols()));
  for (Eigen::Index k = 0; k < composed.cols(); ++k) {
    out.push_back({o.p_exists.value()(0, k), o.p_forward.value()(0, k)});
  }
  return out;
}

EventPrediction EventModel::Predict(const PairInput &input) const {
  return Predict(Matrix(Compose(input))).front();
}

std::vector<ndiff::NamedTensor> EventModel::Parameters() {
  std::vector<ndiff::NamedTensor> out;
  exist_hidden_.AppendParameters("exists.f1", out);
  exist_output_.AppendParameters("exists.f2", out);
  direction_hidden_.AppendParameters("direction.f1", out);
  direction_output_.AppendParameters("direction.f2", out);
  return out;
}

void EventModel::Save(std::ostream &out) const {
  auto params = const_cast<EventModel *>(this)->Parameters();
  ndiff::WriteCheckpoint(out, params);
}

void EventModel::Load(std::istream &in) {
  ndiff::LoadCheckpointInto(in, Parameters());
}

Var EventLoss(const EventOutputs &out, std::span<const PairLabel> labels) {
  std::vector<double> exists, forward;
  exists.reserve(labels.size());
  forward.reserve(labels.size());
  for (const PairLabel &l : labels) {
    exists.push_back(l.exists);
    forward.push_back(l.forward);
  }
  Var loss = ndiff::Bce(out.p_exists, exists);
  if (std::any_of(exists.begin(), exists.end(), [](double v) { return v > 0; })) {
    loss = ndiff::Add(loss, ndiff::Bce(out.p_forward, forward, exists));
  }
  return loss;
}

EventTrainResult TrainEventModel(const EventSignature &signature,
                                 const Matrix &composed,
                                 std::span<const PairLabel> labels,
                                 const EventHyper &hyper, Rng &rng) {
  if (hyper.batch < 1 || hyper.epochs < 0) {
    throw Error(ErrorKind::kConfig, "batch must be >= 1 and epochs >= 0");
  }
  if (static_cast<std::size_t>(composed.cols()) != labels.size()) {
    throw Error(ErrorKind::kShape, "composed inputs and labels differ in count");
  }
  std::vector<int> exists;
  exists.reserve(labels.size());
  for (const PairLabel &l : labels) {
    if (l.forward && !l.exists) {
      throw Error(ErrorKind::kTrainingSetup,
                  "pair label has direction without existence");
    }
    exists.push_back(l.exists);
  }
  const auto positives = std::count(exists.begin(), exists.end(), 1);
  if (positives == 0 || static_cast<std::size_t>(positives) == exists.size()) {
    throw Error(ErrorKind::kTrainingSetup,
                fmt::format("event type {} needs both existing and absent "
                            "pairs ({} of {} positive)",
                            signature.type, positives, exists.size()));
  }

  EventTrainResult result{
      EventModel(signature.type, signature.source_role, signature.target_role,
                 static_cast<int>(composed.rows()), hyper.hidden),
      {}, 0};
  EventModel &model = result.model;
  model.Initialize(rng);

  std::vector<std::size_t> order =
      vecent::OversampleIndices(exists, hyper.oversample_ratio, rng);
  result.trained_samples = order.size();
  auto params = model.Parameters();
  ndiff::Sgd sgd(hyper.learning_rate, hyper.momentum);

  std::vector<PairLabel> batch_labels;
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0.0;
    std::size_t exists_correct = 0, dir_correct = 0, dir_total = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hyper.batch)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(hyper.batch));
      Matrix x(composed.rows(), static_cast<Eigen::Index>(stop - start));
      batch_labels.clear();
      for (std::size_t i = start; i < stop; ++i) {
        x.col(static_cast<Eigen::Index>(i - start)) =
            composed.col(static_cast<Eigen::Index>(order[i]));
        batch_labels.push_back(labels[order[i]]);
      }
      Tape tape;
      EventOutputs out = model.Forward(tape, tape.Constant(std::move(x)));
      Var loss = EventLoss(out, batch_labels);
      loss_sum += loss.value()(0, 0);
      const Matrix pe = out.p_exists.value();
      const Matrix pf = out.p_forward.value();
      Var mean =
          ndiff::Scale(loss, 1.0 / static_cast<double>(batch_labels.size()));
      ndiff::ZeroGrads(params);
      tape.Backward(mean);
      sgd.Step(params);
      for (std::size_t k = 0; k < batch_labels.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        exists_correct += (pe(0, col) >= 0.5) == (batch_labels[k].exists == 1);
        if (batch_labels[k].exists) {
          ++dir_total;
          dir_correct += (pf(0, col) >= 0.5) == (batch_labels[k].forward == 1);
        }
      }
    }
    const auto n = static_cast<double>(order.size());
    result.log.push_back(
        {epoch, loss_sum / n, static_cast<double>(exists_correct) / n,
         dir_total ? static_cast<double>(dir_correct) / dir_total : 0.0});
  }
  return result;
}

std::string EventLogCsv(const std::vector<EventEpochRecord> &log) {
  std::string out = "epoch,loss,exists_accuracy,direction_accuracy\n";
  for (const EventEpochRecord &r : log) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", r.epoch, r.loss,
                       r.exists_accuracy, r.direction_accuracy);
  }
  return out;
}

std::vector<corpus::Event> DecodeEvents(
    const corpus::AnnotatedDocument &doc,
    std::span<const CandidatePair> pairs,
    std::span<const EventPrediction> predictions,
    const std::string &event_type, double threshold) {
  if (pairs.size() != predictions.size()) {
    throw Error(ErrorKind::kShape, "decode: pairs and predictions differ");
  }
  // Unordered key -> index of the best ordering seen so far.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> best;
  std::vector<std::pair<std::size_t, std::size_t>> key_order;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto key = std::minmax(pairs[i].first, pairs[i].second);
    auto [it, inserted] = best.emplace(key, i);
    if (inserted) {
      key_order.push_back(key);
    } else if (predictions[i].p_exists > predictions[it->second].p_exists) {
      it->second = i;
    }
  }
  std::vector<corpus::Event> out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto &key : key_order) {
    const std::size_t i = best.at(key);
    if (!(predictions[i].p_exists >= threshold)) continue;
    std::size_t s = pairs[i].first, t = pairs[i].second;
    if (!(predictions[i].p_forward >= 0.5)) std::swap(s, t);
    if (!seen.emplace(s, t).second) continue;
    corpus::Event e;
    e.type = event_type;
    e.source = doc.entities[s].id;
    e.target = doc.entities[t].id;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace vecevent::vecom
