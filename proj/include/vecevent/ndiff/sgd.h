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

#ifndef VECEVENT_NDIFF_SGD_H_
#define VECEVENT_NDIFF_SGD_H_

#include <span>
#include <vector>

#include "vecevent/ndiff/tensor.h"

namespace vecevent::ndiff {

// Momentum SGD: v <- mu v - eta g; p <- p + v.
class Sgd {
 public:
  Sgd(double learning_rate, double momentum);

  double learning_rate() const { return learning_rate_; }
  double momentum() const { return momentum_; }

  // Applies one update from each tensor's accumulated gradient. Velocity
  // buffers are bound to parameter positions on the first call. Throws
  // kTraining naming the parameter if any gradient is non-finite; in that
  // case no parameter is modified.
  void Step(std::span<const NamedTensor> params);

 private:
  double learning_rate_;
  double momentum_;
  std::vector<Matrix> velocity_;
};

void ZeroGrads(std::span<const NamedTensor> params);

}  // namespace vecevent::ndiff

#endif  // VECEVENT_NDIFF_SGD_H_
