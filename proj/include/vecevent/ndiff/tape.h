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

#ifndef VECEVENT_NDIFF_TAPE_H_
#define VECEVENT_NDIFF_TAPE_H_

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>

#include "vecevent/ndiff/tensor.h"

namespace vecevent::ndiff {

class Tape;

// Handle to a value recorded on a tape.
class Var {
 public:
  Var() = default;

  const Matrix &value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Tape *tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape *tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape *tape_ = nullptr;
  std::size_t id_ = 0;
};

// Reverse-mode recording. Nodes are appended in evaluation order, which is a
// topological order, so backward walks the list once from the end. A tape
// belongs to one thread.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape &, const Matrix &grad_out)>;

  enum class Mode { kTrain, kInference };

  explicit Tape(Mode mode = Mode::kTrain) : mode_(mode) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Mode mode() const { return mode_; }
  bool recording() const { return mode_ == Mode::kTrain; }

  Var Constant(Matrix value);
  // Borrows the tensor's storage; the tensor must outlive the tape contents.
  // In inference mode leaves are treated as constants.
  Var Leaf(Tensor &tensor);
  // Read-only parameters never receive gradients.
  Var Leaf(const Tensor &tensor);

  // Appends a computed node. `backward` is kept only if some input needs a
  // gradient.
  Var Record(Matrix value, std::initializer_list<Var> inputs,
             BackwardFn backward);
  Var Record(Matrix value, const std::vector<Var> &inputs,
             BackwardFn backward);

  const Matrix &value(Var v) const;
  bool NeedsGrad(Var v) const { return nodes_[v.id()].needs_grad; }

  // Gradient accumulator of `v`, zero-initialized on first use.
  Matrix &GradSlot(Var v);

  // Seeds d(loss)/d(loss) = 1, propagates to every leaf with requires_grad
  // (accumulating into Tensor::grad), then clears the tape. `loss` must be
  // 1x1.
  void Backward(Var loss);

  void Clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix owned;
    const Matrix *borrowed = nullptr;
    Matrix grad;
    bool needs_grad = false;
    Tensor *leaf = nullptr;
    BackwardFn backward;

    const Matrix &value() const { return borrowed ? *borrowed : owned; }
  };

  Var Push(Node node);
  void CheckOwned(Var v) const;

  Mode mode_;
  std::deque<Node> nodes_;
};

}  // namespace vecevent::ndiff

#endif  // VECEVENT_NDIFF_TAPE_H_
