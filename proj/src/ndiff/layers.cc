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

#include "vecevent/ndiff/layers.h"

#include <cmath>

#include "vecevent/error.h"

namespace vecevent::ndiff {
namespace {

void GlorotUniform(Matrix &block, int fan_in, int fan_out, Rng &rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index j = 0; j < block.cols(); ++j) {
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      block(i, j) = rng.Uniform(-limit, limit);
    }
  }
}

}  // namespace

DenseParams::DenseParams(int input_size, int output_size)
    : weight(static_cast<std::size_t>(output_size),
             static_cast<std::size_t>(input_size), true),
      bias(static_cast<std::size_t>(output_size), true) {
  if (input_size < 1 || output_size < 1) {
    throw Error(ErrorKind::kShape, "dense layer sizes must be positive");
  }
}

void DenseParams::Initialize(Rng &rng) {
  GlorotUniform(weight.value(), input_size(), output_size(), rng);
  bias.value().setZero();
}

void DenseParams::AppendParameters(const std::string &prefix,
                                   std::vector<NamedTensor> &out) {
  out.push_back({prefix + ".weight", &weight});
  out.push_back({prefix + ".bias", &bias});
}

Var Affine(Tape &tape, DenseParams &params, Var x) {
  return Affine(tape.Leaf(params.weight), tape.Leaf(params.bias), x);
}

Var Affine(Tape &tape, const DenseParams &params, Var x) {
  return Affine(tape.Leaf(params.weight), tape.Leaf(params.bias), x);
}

LstmCellParams::LstmCellParams(int input_size, int hidden_size)
    : weight(4 * static_cast<std::size_t>(hidden_size),
             static_cast<std::size_t>(input_size + hidden_size), true),
      bias(4 * static_cast<std::size_t>(hidden_size), true),
      input_size_(input_size),
      hidden_size_(hidden_size) {
  if (input_size < 1 || hidden_size < 1) {
    throw Error(ErrorKind::kShape, "LSTM sizes must be positive");
  }
}

void LstmCellParams::Initialize(Rng &rng) {
  const int h = hidden_size_;
  for (int gate = 0; gate < 4; ++gate) {
    Matrix block(h, input_size_ + h);
    GlorotUniform(block, input_size_ + h, h, rng);
    weight.value().middleRows(gate * h, h) = block;
  }
  bias.value().setZero();
  bias.value().middleRows(h, h).setConstant(1.0);
}

void LstmCellParams::AppendParameters(const std::string &prefix,
                                      std::vector<NamedTensor> &out) {
  out.push_back({prefix + ".weight", &weight});
  out.push_back({prefix + ".bias", &bias});
}

BoundLstm Bind(Tape &tape, LstmCellParams &cell) {
  return {tape.Leaf(cell.weight), tape.Leaf(cell.bias), cell.input_size(),
          cell.hidden_size()};
}

BoundLstm Bind(Tape &tape, const LstmCellParams &cell) {
  return {tape.Leaf(cell.weight), tape.Leaf(cell.bias), cell.input_size(),
          cell.hidden_size()};
}

LstmState LstmStep(const BoundLstm &cell, Var x, Var h, Var c) {
  const int n = cell.hidden_size;
  if (x.rows() != cell.input_size || h.rows() != n || c.rows() != n ||
      h.cols() != x.cols() || c.cols() != x.cols()) {
    throw Error(ErrorKind::kShape, "lstm_step: input/state sizes disagree");
  }
  Var z = Affine(cell.weight, cell.bias, {x, h});
  Var gates = Sigmoid(SliceRows(z, 0, 3 * n));
  Var input_gate = SliceRows(gates, 0, n);
  Var forget_gate = SliceRows(gates, n, n);
  Var output_gate = SliceRows(gates, 2 * n, n);
  Var candidate = Tanh(SliceRows(z, 3 * n, n));
  Var c_next = Add(Mul(forget_gate, c), Mul(input_gate, candidate));
  Var h_next = Mul(output_gate, Tanh(c_next));
  return {h_next, c_next};
}

Var LstmLast(const BoundLstm &cell, const std::vector<Var> &sequence) {
  if (sequence.empty()) {
    throw Error(ErrorKind::kShape, "lstm_last: empty sequence");
  }
  Tape &tape = *sequence.front().tape();
  const Eigen::Index batch = sequence.front().cols();
  LstmState state{tape.Constant(Matrix::Zero(cell.hidden_size, batch)),
                  tape.Constant(Matrix::Zero(cell.hidden_size, batch))};
  for (const Var &x : sequence) {
    state = LstmStep(cell, x, state.h, state.c);
  }
  return state.h;
}

}  // namespace vecevent::ndiff
