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

#include "vecevent/ndiff/tensor.h"

#include "vecevent/error.h"

namespace vecevent::ndiff {

Tensor::Tensor(std::size_t size, bool requires_grad)
    : shape_{size},
      value_(Matrix::Zero(static_cast<Eigen::Index>(size), 1)),
      requires_grad_(requires_grad) {
  if (requires_grad_) grad_ = Matrix::Zero(value_.rows(), value_.cols());
}

Tensor::Tensor(std::size_t rows, std::size_t cols, bool requires_grad)
    : shape_{rows, cols},
      value_(Matrix::Zero(static_cast<Eigen::Index>(rows),
                          static_cast<Eigen::Index>(cols))),
      requires_grad_(requires_grad) {
  if (requires_grad_) grad_ = Matrix::Zero(value_.rows(), value_.cols());
}

Tensor Tensor::FromShape(const std::vector<std::size_t> &shape,
                         bool requires_grad) {
  if (shape.size() == 1) return Tensor(shape[0], requires_grad);
  if (shape.size() == 2) return Tensor(shape[0], shape[1], requires_grad);
  throw Error(ErrorKind::kShape,
              "tensor rank must be 1 or 2, got " + std::to_string(shape.size()));
}

void Tensor::set_requires_grad(bool flag) {
  requires_grad_ = flag;
  if (flag) {
    grad_ = Matrix::Zero(value_.rows(), value_.cols());
  } else {
    grad_.resize(0, 0);
  }
}

void Tensor::ZeroGrad() {
  if (requires_grad_) grad_.setZero(value_.rows(), value_.cols());
}

}  // namespace vecevent::ndiff
