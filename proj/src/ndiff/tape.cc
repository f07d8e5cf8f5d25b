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

#include "vecevent/ndiff/tape.h"

#include <string>

#include "vecevent/error.h"

namespace vecevent::ndiff {

const Matrix &Var::value() const { return tape_->value(*this); }

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::CheckOwned(Var v) const {
  if (v.tape() != this || v.id() >= nodes_.size()) {
    throw Error(ErrorKind::kShape, "variable does not belong to this tape");
  }
}

Var Tape::Constant(Matrix value) {
  Node node;
  node.owned = std::move(value);
  return Push(std::move(node));
}

Var Tape::Leaf(Tensor &tensor) {
  Node node;
  node.borrowed = &tensor.value();
  if (recording() && tensor.requires_grad()) {
    node.needs_grad = true;
    node.leaf = &tensor;
  }
  return Push(std::move(node));
}

Var Tape::Leaf(const Tensor &tensor) {
  Node node;
  node.borrowed = &tensor.value();
  return Push(std::move(node));
}

Var Tape::Record(Matrix value, std::initializer_list<Var> inputs,
                 BackwardFn backward) {
  Node node;
  node.owned = std::move(value);
  if (recording()) {
    for (const Var &in : inputs) {
      CheckOwned(in);
      if (nodes_[in.id()].needs_grad) node.needs_grad = true;
    }
    if (node.needs_grad) node.backward = std::move(backward);
  }
  return Push(std::move(node));
}

Var Tape::Record(Matrix value, const std::vector<Var> &inputs,
                 BackwardFn backward) {
  Node node;
  node.owned = std::move(value);
  if (recording()) {
    for (const Var &in : inputs) {
      CheckOwned(in);
      if (nodes_[in.id()].needs_grad) node.needs_grad = true;
    }
    if (node.needs_grad) node.backward = std::move(backward);
  }
  return Push(std::move(node));
}

const Matrix &Tape::value(Var v) const {
  CheckOwned(v);
  return nodes_[v.id()].value();
}

Matrix &Tape::GradSlot(Var v) {
  Node &node = nodes_[v.id()];
  if (node.grad.size() == 0) {
    const Matrix &val = node.value();
    node.grad = Matrix::Zero(val.rows(), val.cols());
  }
  return node.grad;
}

void Tape::Backward(Var loss) {
  CheckOwned(loss);
  const Matrix &out = value(loss);
  if (out.rows() != 1 || out.cols() != 1) {
    throw Error(ErrorKind::kShape,
                "backward needs a scalar loss, got " +
                    std::to_string(out.rows()) + "x" +
                    std::to_string(out.cols()));
  }
  if (recording() && nodes_[loss.id()].needs_grad) {
    GradSlot(loss)(0, 0) += 1.0;
    for (std::size_t i = loss.id() + 1; i-- > 0;) {
      Node &node = nodes_[i];
      if (!node.needs_grad || node.grad.size() == 0) continue;
      if (node.leaf != nullptr) {
        node.leaf->grad() += node.grad;
      } else if (node.backward) {
        node.backward(*this, node.grad);
      }
    }
  }
  Clear();
}

}  // namespace vecevent::ndiff
