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

#ifndef VECEVENT_NDIFF_LAYERS_H_
#define VECEVENT_NDIFF_LAYERS_H_

#include <string>
#include <utility>
#include <vector>

#include "vecevent/ndiff/ops.h"
#include "vecevent/ndiff/tape.h"
#include "vecevent/random.h"

namespace vecevent::ndiff {

// Fully connected layer y = A x + b.
struct DenseParams {
  DenseParams() = default;
  DenseParams(int input_size, int output_size);

  int input_size() const { return static_cast<int>(weight.cols()); }
  int output_size() const { return static_cast<int>(weight.rows()); }

  // Glorot-uniform weights, zero bias.
  void Initialize(Rng &rng);
  void AppendParameters(const std::string &prefix,
                        std::vector<NamedTensor> &out);

  Tensor weight;
  Tensor bias;
};

Var Affine(Tape &tape, DenseParams &params, Var x);
Var Affine(Tape &tape, const DenseParams &params, Var x);

// Forget-gate LSTM cell. The weight stacks the gate blocks by rows in the
// order input, forget, output, candidate; each block is
// hidden x (input + hidden) and reads [x_t; h].
struct LstmCellParams {
  LstmCellParams() = default;
  LstmCellParams(int input_size, int hidden_size);

  int input_size() const { return input_size_; }
  int hidden_size() const { return hidden_size_; }

  // Glorot-uniform per gate block, zero biases, forget bias +1.
  void Initialize(Rng &rng);
  void AppendParameters(const std::string &prefix,
                        std::vector<NamedTensor> &out);

  Tensor weight;
  Tensor bias;

 private:
  int input_size_ = 0;
  int hidden_size_ = 0;
};

// Cell parameters registered on one tape, reused across time steps.
struct BoundLstm {
  Var weight;
  Var bias;
  int input_size = 0;
  int hidden_size = 0;
};

BoundLstm Bind(Tape &tape, LstmCellParams &cell);
BoundLstm Bind(Tape &tape, const LstmCellParams &cell);

struct LstmState {
  Var h;
  Var c;
};

// One step over a batch: x is input_size x B, h and c are hidden x B.
LstmState LstmStep(const BoundLstm &cell, Var x, Var h, Var c);

// Folds LstmStep over the sequence from a zero state and returns the final
// hidden state. Throws on an empty sequence.
Var LstmLast(const BoundLstm &cell, const std::vector<Var> &sequence);

}  // namespace vecevent::ndiff

#endif  // VECEVENT_NDIFF_LAYERS_H_
