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

#ifndef VECEVENT_GRADCHECK_SUITE_H_
#define VECEVENT_GRADCHECK_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace vecevent {

struct GradcheckCase {
  std::string name;
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t entries = 0;
  bool passed = false;
};

// Finite-difference checks of every operator, the LSTM cell, and the full
// argument and event losses on small random instances (window <= 4,
// hidden <= 8).
std::vector<GradcheckCase> RunGradcheckSuite(std::uint64_t seed,
                                             double tolerance = 1e-4,
                                             double epsilon = 1e-5);

}  // namespace vecevent

#endif  // VECEVENT_GRADCHECK_SUITE_H_
