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

#ifndef VECEVENT_NDIFF_TENSOR_H_
#define VECEVENT_NDIFF_TENSOR_H_

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vecevent::ndiff {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::VectorXd;

// Dense rank-1 or rank-2 array of doubles. Rank-1 tensors are stored as a
// single column. Mini-batches are laid out one sample per column.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::size_t size, bool requires_grad = false);
  Tensor(std::size_t rows, std::size_t cols, bool requires_grad = false);
  // Shape rank must be 1 or 2.
  static Tensor FromShape(const std::vector<std::size_t> &shape,
                          bool requires_grad = false);

  const std::vector<std::size_t> &shape() const { return shape_; }
  std::size_t size() const { return static_cast<std::size_t>(value_.size()); }
  Eigen::Index rows() const { return value_.rows(); }
  Eigen::Index cols() const { return value_.cols(); }

  Matrix &value() { return value_; }
  const Matrix &value() const { return value_; }
  Matrix &grad() { return grad_; }
  const Matrix &grad() const { return grad_; }

  bool requires_grad() const { return requires_grad_; }
  void set_requires_grad(bool flag);

  void ZeroGrad();
  bool AllFinite() const { return value_.allFinite(); }

  // Column-major flat view.
  std::span<double> data() { return {value_.data(), size()}; }
  std::span<const double> data() const { return {value_.data(), size()}; }

 private:
  std::vector<std::size_t> shape_;
  Matrix value_;
  Matrix grad_;
  bool requires_grad_ = false;
};

struct NamedTensor {
  std::string name;
  Tensor *tensor;
};

}  // namespace vecevent::ndiff

#endif  // VECEVENT_NDIFF_TENSOR_H_
