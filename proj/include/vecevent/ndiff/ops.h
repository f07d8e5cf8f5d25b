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

#ifndef VECEVENT_NDIFF_OPS_H_
#define VECEVENT_NDIFF_OPS_H_

#include <span>
#include <vector>

#include "vecevent/ndiff/tape.h"
#include "vecevent/random.h"

namespace vecevent::ndiff {

// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before logs.
inline constexpr double kProbEpsilon = 1e-7;

// y = W [x_0; x_1; ...] + b, with the bias broadcast over columns. The
// inputs are concatenated implicitly along rows, so an LSTM gate can read
// [x_t; h] without materializing the concatenation.
Var Affine(Var weight, Var bias, std::initializer_list<Var> inputs);
inline Var Affine(Var weight, Var bias, Var x) {
  return Affine(weight, bias, {x});
}

Var Tanh(Var x);
Var Sigmoid(Var x);
// Subgradient 0 at 0.
Var Relu(Var x);
// Gradient sign(x), subgradient 0 at 0.
Var Abs(Var x);

Var Add(Var a, Var b);
Var Sub(Var a, Var b);
// Elementwise (Hadamard) product.
Var Mul(Var a, Var b);
Var Scale(Var x, double factor);

// Concatenation along rows; all parts must have the same column count.
Var Concat(const std::vector<Var> &parts);
Var SliceRows(Var x, Eigen::Index begin, Eigen::Index count);

// Sum of all entries, as a 1x1 value.
Var Sum(Var x);

// Inverted dropout: in training mode each entry is zeroed with probability
// `rate` and survivors are scaled by 1/(1-rate); otherwise identity.
Var Dropout(Var x, double rate, bool training, Rng &rng);

// -sum_i [ z y_i log p_i + (1 - z)(1 - y_i) log(1 - p_i) ] over a 1xB row
// of probabilities. z must lie in [0, 1].
Var WeightedBce(Var probs, std::span<const double> labels, double z);

// Unweighted binary cross-entropy sum; entries with mask 0 are ignored.
// An empty mask means all ones.
Var Bce(Var probs, std::span<const double> labels,
        std::span<const double> mask = {});

}  // namespace vecevent::ndiff

#endif  // VECEVENT_NDIFF_OPS_H_
