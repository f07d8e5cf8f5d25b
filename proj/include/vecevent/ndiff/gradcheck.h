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

#ifndef VECEVENT_NDIFF_GRADCHECK_H_
#define VECEVENT_NDIFF_GRADCHECK_H_

#include <functional>
#include <span>
#include <string>

#include "vecevent/ndiff/tape.h"

namespace vecevent::ndiff {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t entries_checked = 0;
};

// |a - n| / max(|a|, |n|, floor).
double RelativeError(double analytic, double numeric, double floor = 1e-6);

// Compares backward() against central finite differences for every entry of
// every listed tensor. `loss` must build a 1x1 value on the given tape and
// be a deterministic function of the tensor values.
GradCheckResult CheckGradients(const std::function<Var(Tape &)> &loss,
                               std::span<const NamedTensor> params,
                               double epsilon = 1e-5);

}  // namespace vecevent::ndiff

#endif  // VECEVENT_NDIFF_GRADCHECK_H_
