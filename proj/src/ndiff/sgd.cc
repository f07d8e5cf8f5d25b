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

#include "vecevent/ndiff/sgd.h"

#include <string>

#include "vecevent/error.h"

namespace vecevent::ndiff {

Sgd::Sgd(double learning_rate, double momentum)
    : learning_rate_(learning_rate), momentum_(momentum) {
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorKind::kConfig, "learning rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw Error(ErrorKind::kConfig, "momentum must lie in [0, 1)");
  }
}

void Sgd::Step(std::span<const NamedTensor> params) {
  if (velocity_.empty()) {
    velocity_.reserve(params.size());
    for (const NamedTensor &p : params) {
      velocity_.push_back(Matrix::Zero(p.tensor->rows(), p.tensor->cols()));
    }
  }
  if (velocity_.size() != params.size()) {
    throw Error(ErrorKind::kShape, "optimizer bound to a different parameter set");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Tensor &t = *params[i].tensor;
    if (t.grad().rows() != velocity_[i].rows() ||
        t.grad().cols() != velocity_[i].cols()) {
      throw Error(ErrorKind::kShape,
                  "gradient shape changed for parameter " + params[i].name);
    }
    if (!t.grad().allFinite()) {
      throw Error(ErrorKind::kTraining,
                  "non-finite gradient in parameter " + params[i].name);
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor &t = *params[i].tensor;
    velocity_[i] = momentum_ * velocity_[i] - learning_rate_ * t.grad();
    t.value() += velocity_[i];
  }
}

void ZeroGrads(std::span<const NamedTensor> params) {
  for (const NamedTensor &p : params) p.tensor->ZeroGrad();
}

}  // namespace vecevent::ndiff
