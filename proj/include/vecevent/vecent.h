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

#ifndef VECEVENT_VECENT_H_
#define VECEVENT_VECENT_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vecevent/corpus.h"
#include "vecevent/embed.h"
#include "vecevent/ndiff/layers.h"
#include "vecevent/ndiff/tape.h"
#include "vecevent/random.h"

// Argument context classifiers: a bidirectional LSTM over the closed-boundary
// window around an entity, followed by a two-layer MLP. The first MLP layer's
// output is the argument embedding consumed by the event classifiers.
namespace vecevent::vecent {

using ndiff::Matrix;
using ndiff::Tape;
using ndiff::Var;
using ndiff::Vector;

// Closed-boundary context around an entity anchor. `left` holds the anchor
// and the `window` word tokens before it, left-padded; `right` holds the
// anchor and the `window` word tokens after it, read right-to-left and padded
// at the far end. Both halves end with the anchor. nullopt marks a pad slot.
struct ContextWindow {
  std::vector<std::optional<std::string>> left;
  std::vector<std::optional<std::string>> right;
  Matrix left_vectors;   // dim x (window + 1)
  Matrix right_vectors;  // dim x (window + 1)

  std::size_t length() const { return left.size(); }
};

// True for tokens that take part in windows (at least one letter or digit).
bool IsWordToken(std::string_view text);

// Anchor is the last token of the entity's token range. Punctuation-only
// tokens are skipped when collecting context. Throws if window < 1.
ContextWindow BuildContext(const corpus::Sentence &sentence,
                           const corpus::Entity &entity, int window,
                           const embed::EmbeddingTable &table);

struct ArgumentHyper {
  int window = 10;
  int lstm_hidden = 128;
  int mlp_hidden = 128;
  int batch = 32;
  int epochs = 10;
  double dropout = 0.2;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double oversample_ratio = 5.0;
};

class ArgumentModel {
 public:
  ArgumentModel(std::string argument_type, int input_dim, int lstm_hidden,
                int mlp_hidden, double dropout);

  const std::string &argument_type() const { return argument_type_; }
  int input_dim() const { return forward_cell_.input_size(); }
  int lstm_hidden() const { return forward_cell_.hidden_size(); }
  int mlp_hidden() const { return hidden_.output_size(); }
  double dropout() const { return dropout_; }

  void Initialize(Rng &rng);

  // Batched tape builders; the batch is laid out one window per column and
  // all windows must have the same length.
  // Forward-cell output over the left halves concatenated with the
  // backward-cell output over the right halves: (2 x lstm_hidden) x B.
  Var Encode(Tape &tape, std::span<const ContextWindow *const> batch);
  Var Encode(Tape &tape, std::span<const ContextWindow *const> batch) const;
  // Argument embedding R: first dense layer before its activation.
  Var Embedding(Tape &tape, std::span<const ContextWindow *const> batch);
  Var Embedding(Tape &tape, std::span<const ContextWindow *const> batch) const;
  // Sigmoid(F2(Dropout(Tanh(F1(Encode))))): 1 x B probabilities.
  Var Forward(Tape &tape, std::span<const ContextWindow *const> batch,
              bool training, Rng &rng);
  Var Forward(Tape &tape, std::span<const ContextWindow *const> batch) const;

  // Inference helpers (dropout off, deterministic).
  double Predict(const ContextWindow &window) const;
  std::vector<double> PredictBatch(
      std::span<const ContextWindow *const> windows) const;
  Vector ArgumentEmbedding(const ContextWindow &window) const;
  // mlp_hidden x N.
  Matrix ArgumentEmbeddings(std::span<const ContextWindow *const> windows) const;

  std::vector<ndiff::NamedTensor> Parameters();

  void Save(std::ostream &out) const;
  void Load(std::istream &in);

  // Direct parameter access for tests and tooling.
  ndiff::LstmCellParams &forward_cell() { return forward_cell_; }
  ndiff::LstmCellParams &backward_cell() { return backward_cell_; }
  ndiff::DenseParams &hidden_layer() { return hidden_; }
  ndiff::DenseParams &output_layer() { return output_; }

 private:
  template <typename Self>
  static Var EncodeImpl(Self &self, Tape &tape,
                        std::span<const ContextWindow *const> batch);

  std::string argument_type_;
  double dropout_;
  ndiff::LstmCellParams forward_cell_;
  ndiff::LstmCellParams backward_cell_;
  ndiff::DenseParams hidden_;
  ndiff::DenseParams output_;
};

// z = 1 - n/N for n positives among N labels. Throws kTrainingSetup unless
// both classes are present.
double ClassWeight(std::span<const int> labels);

// Indices into `labels` after duplicating minority samples chosen uniformly
// at random until majority/minority <= max_ratio. The original indices come
// first in order, followed by the duplicates. Unchanged when the bound
// already holds or a class is missing.
std::vector<std::size_t> OversampleIndices(std::span<const int> labels,
                                           double max_ratio, Rng &rng);

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;      // mean per-sample loss over the epoch
  double accuracy = 0.0;  // threshold 0.5
  double mse = 0.0;
};

struct ArgSample {
  std::size_t window = 0;  // index into the window list
  int label = 0;
  std::string entity_id;
};

struct ArgumentTrainResult {
  ArgumentModel model;
  std::vector<EpochRecord> log;
  double class_weight = 0.5;
  std::size_t trained_samples = 0;
};

// Mini-batch SGD on the class-weighted cross-entropy. The class weight comes
// from the samples as given; oversampling happens inside, on these samples
// only.
ArgumentTrainResult TrainArgumentModel(const std::string &argument_type,
                                       std::span<const ContextWindow> windows,
                                       std::span<const ArgSample> samples,
                                       const ArgumentHyper &hyper, Rng &rng);

std::string EpochLogCsv(const std::vector<EpochRecord> &log);

}  // namespace vecevent::vecent

#endif  // VECEVENT_VECENT_H_
