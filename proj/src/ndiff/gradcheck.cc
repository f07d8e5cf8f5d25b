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

#include "vecevent/ndiff/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "vecevent/ndiff/sgd.h"

namespace vecevent::ndiff {
namespace {

double Evaluate(const std::function<Var(Tape &)> &loss) {
  Tape tape(Tape::Mode::kInference);
  return loss(tape).value()(0, 0);
}

}  // namespace

double RelativeError(double analytic, double numeric, double floor) {
  const double scale =
      std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

GradCheckResult CheckGradients(const std::function<Var(Tape &)> &loss,
                               std::span<const NamedTensor> params,
                               double epsilon) {
  std::vector<bool> saved_flags;
  for (const NamedTensor &p : params) {
    saved_flags.push_back(p.tensor->requires_grad());
    p.tensor->set_requires_grad(true);
  }
  ZeroGrads(params);
  {
    Tape tape;
    tape.Backward(loss(tape));
  }

  GradCheckResult result;
  for (const NamedTensor &p : params) {
    Matrix &value = p.tensor->value();
    const Matrix analytic = p.tensor->grad();
    for (Eigen::Index k = 0; k < value.size(); ++k) {
      const double original = value.data()[k];
      value.data()[k] = original + epsilon;
      const double up = Evaluate(loss);
      value.data()[k] = original - epsilon;
      const double down = Evaluate(loss);
      value.data()[k] = original;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double err = RelativeError(analytic.data()[k], numeric);
      ++result.entries_checked;
      if (err >= result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_parameter = p.name;
      }
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i].tensor->set_requires_grad(saved_flags[i]);
  }
  return result;
}

}  // namespace vecevent::ndiff
