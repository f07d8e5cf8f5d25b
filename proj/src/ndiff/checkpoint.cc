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

#include "vecevent/ndiff/checkpoint.h"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>

#include "vecevent/error.h"

namespace vecevent::ndiff {
namespace {

constexpr std::array<char, 8> kMagic = {'V', 'E', 'V', 'T', 'C', 'K', 'P', 'T'};

template <typename T>
void PutLittle(std::ostream &out, T value) {
  static_assert(std::is_unsigned_v<T>);
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLittle(std::istream &in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char *>(bytes.data()), bytes.size())) {
    throw Error(ErrorKind::kFormat, "checkpoint truncated");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

void PutDouble(std::ostream &out, double v) {
  PutLittle(out, std::bit_cast<std::uint64_t>(v));
}

double GetDouble(std::istream &in) {
  return std::bit_cast<double>(GetLittle<std::uint64_t>(in));
}

}  // namespace

void WriteCheckpoint(std::ostream &out, std::span<const NamedTensor> tensors) {
  out.write(kMagic.data(), kMagic.size());
  PutLittle<std::uint32_t>(out, kCheckpointVersion);
  PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor &nt : tensors) {
    PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(nt.name.size()));
    out.write(nt.name.data(), static_cast<std::streamsize>(nt.name.size()));
    const auto &shape = nt.tensor->shape();
    PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(shape.size()));
    for (std::size_t d : shape) PutLittle<std::uint64_t>(out, d);
    const Matrix &m = nt.tensor->value();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) PutDouble(out, m(i, j));
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "failed writing checkpoint");
}

std::vector<std::pair<std::string, Tensor>> ReadCheckpoint(std::istream &in) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorKind::kFormat, "not a checkpoint (bad magic)");
  }
  const auto version = GetLittle<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::kFormat,
                "unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = GetLittle<std::uint32_t>(in);
  std::vector<std::pair<std::string, Tensor>> result;
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto name_len = GetLittle<std::uint32_t>(in);
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) {
      throw Error(ErrorKind::kFormat, "checkpoint truncated");
    }
    const auto rank = GetLittle<std::uint32_t>(in);
    if (rank < 1 || rank > 2) {
      throw Error(ErrorKind::kFormat, "tensor " + name + " has rank " +
                                          std::to_string(rank));
    }
    std::vector<std::size_t> shape;
    for (std::uint32_t r = 0; r < rank; ++r) {
      shape.push_back(static_cast<std::size_t>(GetLittle<std::uint64_t>(in)));
    }
    Tensor t = Tensor::FromShape(shape);
    Matrix &m = t.value();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = GetDouble(in);
    }
    if (!m.allFinite()) {
      throw Error(ErrorKind::kFormat, "tensor " + name + " has non-finite values");
    }
    result.emplace_back(std::move(name), std::move(t));
  }
  return result;
}

void LoadCheckpointInto(std::istream &in, std::span<const NamedTensor> tensors) {
  std::map<std::string, Tensor> stored;
  for (auto &[name, t] : ReadCheckpoint(in)) stored.emplace(name, std::move(t));
  for (const NamedTensor &nt : tensors) {
    auto it = stored.find(nt.name);
    if (it == stored.end()) {
      throw Error(ErrorKind::kFormat, "checkpoint lacks tensor " + nt.name);
    }
    if (it->second.shape() != nt.tensor->shape()) {
      throw Error(ErrorKind::kFormat, "checkpoint shape mismatch for " + nt.name);
    }
    nt.tensor->value() = it->second.value();
  }
}

}  // namespace vecevent::ndiff
