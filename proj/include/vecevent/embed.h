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

#ifndef VECEVENT_EMBED_H_
#define VECEVENT_EMBED_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>

#include "vecevent/ndiff/tensor.h"

namespace vecevent::embed {

using ndiff::Matrix;
using ndiff::Vector;

// Reserved token that always maps to the zero pad vector.
inline constexpr std::string_view kPadToken = "<PAD>";

enum class OovPolicy { kZero, kHashed };
enum class TableFormat { kText, kBinary };

OovPolicy ParseOovPolicy(std::string_view name);
TableFormat ParseTableFormat(std::string_view name);

// Word -> vector map. Lookup is total: in-vocabulary words return their row
// (exact match first, lowercase second), the pad token returns zeros and
// anything else follows the OOV policy. Immutable once built; concurrent
// lookups are safe.
class EmbeddingTable {
 public:
  EmbeddingTable(int dim, OovPolicy policy, std::uint64_t seed);

  // Empty vocabulary with hashed OOV vectors.
  static EmbeddingTable MakeHashed(int dim, std::uint64_t seed);

  // word2vec text ("N d" header, then "word v1 ... vd" lines) or binary
  // ("N d\n" header, then word, a space and d little-endian float32 per
  // entry). Duplicate words keep their first row.
  static EmbeddingTable Load(std::istream &in, TableFormat format,
                             OovPolicy policy, std::uint64_t seed);
  static EmbeddingTable LoadFile(const std::string &path, TableFormat format,
                                 OovPolicy policy, std::uint64_t seed);

  int dim() const { return dim_; }
  std::size_t vocab_size() const { return index_.size(); }
  OovPolicy oov_policy() const { return policy_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t duplicate_count() const { return duplicates_; }

  bool Contains(std::string_view word) const;
  Vector Lookup(std::string_view word) const;
  // Writes the lookup result into a dim-sized column.
  void LookupInto(std::string_view word, Eigen::Ref<Vector> out) const;
  const Vector &pad_vector() const { return pad_; }

  // Adds a row; returns false (and counts a duplicate) if present already.
  bool Add(const std::string &word, const Vector &values);

 private:
  void HashedVector(std::string_view word, Eigen::Ref<Vector> out) const;

  int dim_;
  OovPolicy policy_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Vector> rows_;
  Vector pad_;
  std::size_t duplicates_ = 0;
};

}  // namespace vecevent::embed

#endif  // VECEVENT_EMBED_H_
