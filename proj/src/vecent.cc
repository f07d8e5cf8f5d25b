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

#include "vecevent/vecent.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fmt/format.h"
#include "vecevent/error.h"
#include "vecevent/ndiff/checkpoint.h"
#include "vecevent/ndiff/ops.h"
#include "vecevent/ndiff/sgd.h"

namespace vecevent::vecent {
namespace {

using ContextBatch = std::span<const ContextWindow *const>;

void CheckBatch(ContextBatch batch, int input_dim) {
  if (batch.empty()) throw Error(ErrorKind::kShape, "empty window batch");
  const std::size_t length = batch.front()->length();
  for (const ContextWindow *w : batch) {
    if (w->length() != length || w->right.size() != length ||
        w->left_vectors.cols() != static_cast<Eigen::Index>(length) ||
        w->right_vectors.cols() != static_cast<Eigen::Index>(length)) {
      throw Error(ErrorKind::kShape, "windows in a batch differ in length");
    }
    if (w->left_vectors.rows() != input_dim ||
        w->right_vectors.rows() != input_dim) {
      throw Error(ErrorKind::kShape,
                  fmt::format("window vectors have {} rows, model expects {}",
                              w->left_vectors.rows(), input_dim));
    }
  }
}

// One constant per time step, window k in column k.
std::vector<Var> StepInputs(Tape &tape, ContextBatch batch, bool left) {
  const Eigen::Index dim = batch.front()->left_vectors.rows();
  const std::size_t length = batch.front()->length();
  std::vector<Var> steps;
  steps.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    Matrix x(dim, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const Matrix &src = left ? batch[k]->left_vectors : batch[k]->right_vectors;
      x.col(static_cast<Eigen::Index>(k)) = src.col(static_cast<Eigen::Index>(t));
    }
    steps.push_back(tape.Constant(std::move(x)));
  }
  return steps;
}

std::vector<double> Column(const Matrix &m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

}  // namespace

bool IsWordToken(std::string_view text) {
  return std::any_of(text.begin(), text.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u);
  });
}

ContextWindow BuildContext(const corpus::Sentence &sentence,
                           const corpus::Entity &entity, int window,
                           const embed::EmbeddingTable &table) {
  if (window < 1) {
    throw Error(ErrorKind::kConfig,
                fmt::format("context window must be >= 1, got {}", window));
  }
  if (entity.last_token >= sentence.tokens.size()) {
    throw Error(ErrorKind::kAlignment,
                fmt::format("entity {} is not aligned to sentence {}",
                            entity.id, sentence.id));
  }
  std::vector<std::size_t> words;
  std::size_t anchor = 0;
  for (const corpus::Token &token : sentence.tokens) {
    if (token.index == entity.last_token) {
      anchor = words.size();
      words.push_back(token.index);
    } else if (IsWordToken(token.text)) {
      words.push_back(token.index);
    }
  }
  const auto u = static_cast<std::size_t>(window);
  ContextWindow out;
  out.left.assign(u + 1, std::nullopt);
  out.right.assign(u + 1, std::nullopt);
  for (std::size_t k = 0; k <= u; ++k) {
    // Slot k of left holds position anchor - u + k.
    if (anchor + k >= u) {
      out.left[k] = sentence.tokens[words[anchor + k - u]].text;
    }
    // Slot k of right holds position anchor + u - k.
    const std::size_t pos = anchor + u - k;
    if (pos < words.size()) out.right[k] = sentence.tokens[words[pos]].text;
  }
  const int dim = table.dim();
  out.left_vectors = Matrix::Zero(dim, static_cast<Eigen::Index>(u + 1));
  out.right_vectors = Matrix::Zero(dim, static_cast<Eigen::Index>(u + 1));
  for (std::size_t k = 0; k <= u; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    if (out.left[k]) table.LookupInto(*out.left[k], out.left_vectors.col(col));
    if (out.right[k]) {
      table.LookupInto(*out.right[k], out.right_vectors.col(col));
    }
  }
  return out;
}

ArgumentModel::ArgumentModel(std::string argument_type, int input_dim,
                             int lstm_hidden, int mlp_hidden, double dropout)
    : argument_type_(std::move(argument_type)),
      dropout_(dropout),
      forward_cell_(input_dim, lstm_hidden),
      backward_cell_(input_dim, lstm_hidden),
      hidden_(2 * lstm_hidden, mlp_hidden),
      output_(mlp_hidden, 1) {
  if (dropout < 0.0 || dropout >= 1.0) {
    throw Error(ErrorKind::kConfig,
                fmt::format("dropout must be in [0, 1), got {}", dropout));
  }
}

void ArgumentModel::Initialize(Rng &rng) {
  forward_cell_.Initialize(rng);
  backward_cell_.Initialize(rng);
  hidden_.Initialize(rng);
  output_.Initialize(rng);
}

template <typename Self>
Var ArgumentModel::EncodeImpl(Self &self, Tape &tape, ContextBatch batch) {
  CheckBatch(batch, self.input_dim());
  auto fwd = ndiff::Bind(tape, self.forward_cell_);
  auto bwd = ndiff::Bind(tape, self.backward_cell_);
  Var left = ndiff::LstmLast(fwd, StepInputs(tape, batch, true));
  Var right = ndiff::LstmLast(bwd, StepInputs(tape, batch, false));
  return ndiff::Concat({left, right});
}

Var ArgumentModel::Encode(Tape &tape, ContextBatch batch) {
  return EncodeImpl(*this, tape, batch);
}

Var ArgumentModel::Encode(Tape &tape, ContextBatch batch) const {
  return EncodeImpl(*this, tape, batch);
}

Var ArgumentModel::Embedding(Tape &tape, ContextBatch batch) {
  return ndiff::Affine(tape, hidden_, Encode(tape, batch));
}

Var ArgumentModel::Embedding(Tape &tape, ContextBatch batch) const {
  return ndiff::Affine(tape, hidden_, Encode(tape, batch));
}

Var ArgumentModel::Forward(Tape &tape, ContextBatch batch, bool training,
                           Rng &rng) {
  Var h = ndiff::Tanh(Embedding(tape, batch));
  h = ndiff::Dropout(h, dropout_, training, rng);
  return ndiff::Sigmoid(ndiff::Affine(tape, output_, h));
}

Var ArgumentModel::Forward(Tape &tape, ContextBatch batch) const {
  Var h = ndiff::Tanh(Embedding(tape, batch));
  return ndiff::Sigmoid(ndiff::Affine(tape, output_, h));
}

double ArgumentModel::Predict(const ContextWindow &window) const {
  const ContextWindow *one[] = {&window};
  return PredictBatch(one).front();
}

std::vector<double> ArgumentModel::PredictBatch(ContextBatch windows) const {
  if (windows.empty()) return {};
  Tape tape(Tape::Mode::kInference);
  return Column(Forward(tape, windows).value());
}

Vector ArgumentModel::ArgumentEmbedding(const ContextWindow &window) const {
  const ContextWindow *one[] = {&window};
  return ArgumentEmbeddings(one).col(0);
}

Matrix ArgumentModel::ArgumentEmbeddings(ContextBatch windows) const {
  if (windows.empty()) return Matrix(mlp_hidden(), 0);
  Tape tape(Tape::Mode::kInference);
  return Embedding(tape, windows).value();
}

std::vector<ndiff::NamedTensor> ArgumentModel::Parameters() {
  std::vector<ndiff::NamedTensor> out;
  forward_cell_.AppendParameters("lstm_forward", out);
  backward_cell_.AppendParameters("lstm_backward", out);
  hidden_.AppendParameters("f1", out);
  output_.AppendParameters("f2", out);
  return out;
}

void ArgumentModel::Save(std::ostream &out) const {
  auto params = const_cast<ArgumentModel *>(this)->Parameters();
  ndiff::WriteCheckpoint(out, params);
}

void ArgumentModel::Load(std::istream &in) {
  ndiff::LoadCheckpointInto(in, Parameters());
}

double ClassWeight(std::span<const int> labels) {
  const auto positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0 || positives == labels.size()) {
    throw Error(ErrorKind::kTrainingSetup,
                fmt::format("class weight needs both classes ({} of {} "
                            "labels positive)",
                            positives, labels.size()));
  }
  return 1.0 - static_cast<double>(positives) /
                   static_cast<double>(labels.size());
}

std::vector<std::size_t> OversampleIndices(std::span<const int> labels,
                                           double max_ratio, Rng &rng) {
  if (!(max_ratio >= 1.0)) {
    throw Error(ErrorKind::kConfig,
                fmt::format("oversample ratio must be >= 1, got {}", max_ratio));
  }
  std::vector<std::size_t> out(labels.size());
  std::iota(out.begin(), out.end(), std::size_t{0});
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == 1 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) return out;
  const auto &minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t majority = std::max(pos.size(), neg.size());
  auto target = static_cast<std::size_t>(
      std::ceil(static_cast<double>(majority) / max_ratio));
  while (static_cast<double>(majority) >
         max_ratio * static_cast<double>(target)) {
    ++target;
  }
  for (std::size_t n = minority.size(); n < target; ++n) {
    out.push_back(minority[rng.Below(minority.size())]);
  }
  return out;
}

ArgumentTrainResult TrainArgumentModel(const std::string &argument_type,
                                       std::span<const ContextWindow> windows,
                                       std::span<const ArgSample> samples,
                                       const ArgumentHyper &hyper, Rng &rng) {
  if (hyper.batch < 1 || hyper.epochs < 0) {
    throw Error(ErrorKind::kConfig, "batch must be >= 1 and epochs >= 0");
  }
  if (windows.empty()) {
    throw Error(ErrorKind::kTrainingSetup,
                fmt::format("no windows for argument type {}", argument_type));
  }
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const ArgSample &s : samples) {
    if (s.window >= windows.size()) {
      throw Error(ErrorKind::kTrainingSetup, "sample window out of range");
    }
    labels.push_back(s.label);
  }
  const double z = ClassWeight(labels);

  ArgumentTrainResult result{
      ArgumentModel(argument_type, static_cast<int>(windows.front().left_vectors.rows()),
                    hyper.lstm_hidden, hyper.mlp_hidden, hyper.dropout),
      {}, z, 0};
  ArgumentModel &model = result.model;
  model.Initialize(rng);

  std::vector<std::size_t> order =
      OversampleIndices(labels, hyper.oversample_ratio, rng);
  result.trained_samples = order.size();
  auto params = model.Parameters();
  ndiff::Sgd sgd(hyper.learning_rate, hyper.momentum);

  std::vector<const ContextWindow *> batch;
  std::vector<double> batch_labels;
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0.0, sq_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hyper.batch)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(hyper.batch));
      batch.clear();
      batch_labels.clear();
      for (std::size_t i = start; i < stop; ++i) {
        const ArgSample &s = samples[order[i]];
        batch.push_back(&windows[s.window]);
        batch_labels.push_back(static_cast<double>(s.label));
      }
      Tape tape;
      Var probs = model.Forward(tape, batch, true, rng);
      Var loss = ndiff::WeightedBce(probs, batch_labels, z);
      const double batch_loss = loss.value()(0, 0);
      const Matrix p = probs.value();
      Var mean = ndiff::Scale(loss, 1.0 / static_cast<double>(batch.size()));
      ndiff::ZeroGrads(params);
      tape.Backward(mean);
      sgd.Step(params);
      loss_sum += batch_loss;
      for (std::size_t k = 0; k < batch_labels.size(); ++k) {
        const double pk = p(0, static_cast<Eigen::Index>(k));
        correct += (pk >= 0.5) == (batch_labels[k] > 0.5);
        sq_sum += (pk - batch_labels[k]) * (pk - batch_labels[k]);
      }
    }
    const auto n = static_cast<double>(order.size());
    result.log.push_back({epoch, loss_sum / n, static_cast<double>(correct) / n,
                          sq_sum / n});
  }
  return result;
}

std::string EpochLogCsv(const std::vector<EpochRecord> &log) {
  std::string out = "epoch,loss,accuracy,mse\n";
  for (const EpochRecord &r : log) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", r.epoch, r.loss,
                       r.accuracy, r.mse);
  }
  return out;
}

}  // namespace vecevent::vecent
