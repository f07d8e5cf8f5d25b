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

#ifndef VECEVENT_NDIFF_CHECKPOINT_H_
#define VECEVENT_NDIFF_CHECKPOINT_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vecevent/ndiff/tensor.h"

namespace vecevent::ndiff {

// Binary checkpoint layout, all integers and doubles little-endian:
//
//   magic    8 bytes  "VEVTCKPT"
//   version  u32      kCheckpointVersion
//   count    u32
//   count x { name_len u32, name bytes, rank u32, dims u64[rank],
//             values f64[prod(dims)] in row-major order }
inline constexpr std::uint32_t kCheckpointVersion = 1;

void WriteCheckpoint(std::ostream &out, std::span<const NamedTensor> tensors);

std::vector<std::pair<std::string, Tensor>> ReadCheckpoint(std::istream &in);

// Reads a checkpoint and copies values into `tensors` by name. Every named
// tensor must be present with an identical shape.
void LoadCheckpointInto(std::istream &in, std::span<const NamedTensor> tensors);

}  // namespace vecevent::ndiff

#endif  // VECEVENT_NDIFF_CHECKPOINT_H_
